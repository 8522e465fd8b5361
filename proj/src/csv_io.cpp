#include "robuststl/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

namespace robuststl::io {
namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ParseError,
              "line " + std::to_string(line) + ": " + what);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(const std::string& field, std::size_t line,
                    const std::string& column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    parse_fail(line, "cannot parse '" + field + "' in column " + column);
  }
  if (!std::isfinite(value)) {
    parse_fail(line, "non-finite value in column " + column);
  }
  return value;
}

void append_double(std::string& out, double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  out.append(buf, ptr);
}

}  // namespace

std::size_t SeriesFile::rows() const noexcept {
  return columns_.empty() ? 0 : columns_.front().size();
}

bool SeriesFile::has_column(const std::string& name) const noexcept {
  return std::find(names_.begin(), names_.end(), name) != names_.end();
}

const std::vector<double>& SeriesFile::column(const std::string& name) const {
  const auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) {
    throw Error(ErrorCode::ParseError, "file has no column named '" + name +
                                           "'");
  }
  return columns_[static_cast<std::size_t>(it - names_.begin())];
}

void SeriesFile::add_column(const std::string& name,
                            std::vector<double> values) {
  if (name.empty() || name.find(',') != std::string::npos || name == "t") {
    throw Error(ErrorCode::InvalidConfig,
                "column name must be non-empty, must not contain a comma, "
                "and must not shadow the index column");
  }
  if (has_column(name)) {
    throw Error(ErrorCode::InvalidConfig,
                "duplicate column name '" + name + "'");
  }
  if (!columns_.empty() && values.size() != rows()) {
    throw Error(ErrorCode::LengthMismatch,
                "column '" + name + "' length does not match existing rows");
  }
  names_.push_back(name);
  columns_.push_back(std::move(values));
}

SeriesFile SeriesFile::read(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::IoError, "cannot open '" + path + "' for reading");
  }

  std::string line;
  std::size_t line_number = 0;
  if (!std::getline(in, line)) {
    parse_fail(1, "missing header");
  }
  ++line_number;
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const std::vector<std::string> header = split_fields(line);
  std::size_t t_position = header.size();
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "t") t_position = i;
  }
  if (t_position == header.size()) {
    parse_fail(1, "header has no 't' column");
  }

  SeriesFile file;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i == t_position) continue;
    if (header[i].empty()) parse_fail(1, "empty column name in header");
    if (file.has_column(header[i])) {
      parse_fail(1, "duplicate column name '" + header[i] + "'");
    }
    file.names_.push_back(header[i]);
    file.columns_.emplace_back();
  }

  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() && in.peek() == std::ifstream::traits_type::eof()) {
      break;  // trailing newline
    }
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != header.size()) {
      parse_fail(line_number, "expected " + std::to_string(header.size()) +
                                  " fields, got " +
                                  std::to_string(fields.size()));
    }
    ++row;
    const double t_value =
        parse_double(fields[t_position], line_number, "t");
    if (t_value != static_cast<double>(row)) {
      parse_fail(line_number,
                 "index column must be contiguous and 1-based; expected " +
                     std::to_string(row));
    }
    std::size_t out_col = 0;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i == t_position) continue;
      file.columns_[out_col].push_back(
          parse_double(fields[i], line_number, header[i]));
      ++out_col;
    }
  }
  return file;
}

void SeriesFile::write(const std::string& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::IoError, "cannot open '" + path + "' for writing");
  }
  std::string buffer = "t";
  for (const std::string& name : names_) {
    buffer += ',';
    buffer += name;
  }
  buffer += '\n';
  const std::size_t n = rows();
  for (std::size_t r = 0; r < n; ++r) {
    buffer += std::to_string(r + 1);
    for (const std::vector<double>& col : columns_) {
      buffer += ',';
      append_double(buffer, col[r]);
    }
    buffer += '\n';
  }
  out << buffer;
  if (!out) {
    throw Error(ErrorCode::IoError, "write to '" + path + "' failed");
  }
}

}  // namespace robuststl::io
