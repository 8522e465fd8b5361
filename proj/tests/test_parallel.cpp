#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "robuststl/parallel.hpp"

namespace {

/// Runs the same per-point computation under a given thread cap and returns
/// the output, restoring the previous cap afterwards.
std::vector<double> run_with_threads(unsigned threads, std::size_t n) {
  const unsigned previous = robuststl::max_threads();
  robuststl::set_max_threads(threads);
  std::vector<double> out(n);
  robuststl::parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      out[i] = std::sin(0.001 * static_cast<double>(i)) +
               std::sqrt(static_cast<double>(i) + 1.0);
    }
  });
  robuststl::set_max_threads(previous);
  return out;
}

}  // namespace

TEST_CASE("parallel_for visits every index exactly once") {
  const std::size_t n = 10000;
  std::vector<std::atomic<int>> hits(n);
  for (auto& h : hits) h.store(0);
  robuststl::parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      hits[i].fetch_add(1);
    }
  });
  for (std::size_t i = 0; i < n; ++i) {
    REQUIRE(hits[i].load() == 1);
  }
}

TEST_CASE("parallel_for with zero count is a no-op") {
  bool called = false;
  robuststl::parallel_for(0, [&](std::size_t, std::size_t) { called = true; });
  CHECK_FALSE(called);
}

TEST_CASE("outputs are identical regardless of the thread cap") {
  const std::size_t n = 5000;
  const std::vector<double> serial = run_with_threads(1, n);
  for (unsigned threads : {2u, 3u, 8u, 0u}) {
    const std::vector<double> parallel = run_with_threads(threads, n);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < n; ++i) {
      REQUIRE(parallel[i] == serial[i]);
    }
  }
}

TEST_CASE("exceptions thrown by the body propagate to the caller") {
  const unsigned previous = robuststl::max_threads();
  robuststl::set_max_threads(4);
  CHECK_THROWS_AS(
      robuststl::parallel_for(100000,
                              [&](std::size_t begin, std::size_t) {
                                if (begin > 0) {
                                  throw std::runtime_error("worker failed");
                                }
                              }),
      std::runtime_error);
  robuststl::set_max_threads(previous);
}

TEST_CASE("thread cap setting is readable back") {
  const unsigned previous = robuststl::max_threads();
  robuststl::set_max_threads(3);
  CHECK(robuststl::max_threads() == 3);
  robuststl::set_max_threads(previous);
}
