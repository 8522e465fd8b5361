#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "robuststl/core.hpp"

namespace robuststl::io {

/// A CSV table of aligned numeric columns with a leading 1-based `t` index.
/// The index is implicit in memory: it is validated on read (rows must be
/// sorted, contiguous, starting at 1) and regenerated on write. Values are
/// serialized with the shortest decimal form that parses back to the same
/// double, so files round-trip bit for bit.
class SeriesFile {
 public:
  SeriesFile() = default;

  std::size_t rows() const noexcept;
  bool has_column(const std::string& name) const noexcept;
  const std::vector<double>& column(const std::string& name) const;
  const std::vector<std::string>& names() const noexcept { return names_; }

  /// Columns must all have the same length; names must be unique, non-empty,
  /// and free of the CSV delimiter.
  void add_column(const std::string& name, std::vector<double> values);

  /// Throws IoError when the file cannot be opened and ParseError, naming
  /// the 1-based line, for malformed content (wrong field count, unparsable
  /// or non-finite numbers, bad index column).
  static SeriesFile read(const std::string& path);
  void write(const std::string& path) const;

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
};

}  // namespace robuststl::io
