#pragma once

#include <cstddef>
#include <functional>

namespace robuststl {

/// Caps the number of worker threads used by internally parallel loops.
/// 0 restores automatic selection (hardware concurrency). Thread-safe.
void set_max_threads(unsigned count);
unsigned max_threads();

/// Runs fn over [0, count) split into contiguous chunks, one chunk per
/// worker. Outputs must be written only to the chunk's own range, which
/// keeps results bitwise independent of the thread count. Small loops run
/// inline on the calling thread.
void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace robuststl
