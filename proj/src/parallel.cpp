#include "robuststl/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace robuststl {

namespace {

std::atomic<unsigned> g_max_threads{0};

// Below this many items per worker, thread startup dominates the work.
constexpr std::size_t kMinChunk = 256;

}  // namespace

void set_max_threads(unsigned count) { g_max_threads.store(count); }

unsigned max_threads() {
  unsigned cap = g_max_threads.load();
  if (cap == 0) {
    cap = std::thread::hardware_concurrency();
    if (cap == 0) cap = 1;
  }
  return cap;
}

void parallel_for(std::size_t count,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  if (count == 0) return;
  const std::size_t by_size = (count + kMinChunk - 1) / kMinChunk;
  const std::size_t workers =
      std::min<std::size_t>(max_threads(), std::min<std::size_t>(by_size, count));
  if (workers <= 1) {
    fn(0, count);
    return;
  }

  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run_chunk = [&](std::size_t begin, std::size_t end) {
    try {
      fn(begin, end);
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  const std::size_t chunk = (count + workers - 1) / workers;
  std::size_t begin = chunk;  // first chunk runs on the calling thread
  for (std::size_t w = 1; w < workers && begin < count; ++w) {
    const std::size_t end = std::min(begin + chunk, count);
    pool.emplace_back(run_chunk, begin, end);
    begin = end;
  }
  run_chunk(0, std::min(chunk, count));
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace robuststl
