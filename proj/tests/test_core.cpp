#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "robuststl/core.hpp"

using robuststl::Error;
using robuststl::ErrorCode;
using robuststl::RobustStlConfig;
using robuststl::TimeSeries;

namespace {

std::vector<double> counting(std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = static_cast<double>(i);
  return v;
}

}  // namespace

TEST_CASE("time series accepts the minimal legal shape") {
  const TimeSeries s(counting(5), 2);
  CHECK(s.size() == 5);
  CHECK(s.period() == 2);
  CHECK(s.values()[3] == 3.0);
}

TEST_CASE("time series rejects a period below two") {
  CHECK_THROWS_AS(TimeSeries(counting(10), 1), Error);
  try {
    TimeSeries(counting(10), 0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PeriodTooShort);
  }
}

TEST_CASE("time series needs strictly more than two periods") {
  // N = 2T is one sample short of the minimum 2T+1.
  CHECK_THROWS_AS(TimeSeries(counting(100), 50), Error);
  try {
    TimeSeries(counting(60), 50);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SeriesTooShort);
    CHECK(std::string(e.what()).find("101") != std::string::npos);
  }
  CHECK_NOTHROW(TimeSeries(counting(101), 50));
}

TEST_CASE("time series rejects non-finite values and names the position") {
  auto v = counting(9);
  v[4] = std::numeric_limits<double>::quiet_NaN();
  try {
    TimeSeries series(v, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFiniteValue);
    CHECK(std::string(e.what()).find("5") != std::string::npos);
  }
  v[4] = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(TimeSeries(v, 2), Error);
}

TEST_CASE("config validation accepts defaults at the smallest legal series") {
  const TimeSeries s(counting(5), 2);
  const RobustStlConfig config;
  CHECK_NOTHROW(robuststl::validate_config(config, s));
}

TEST_CASE("config validation rejects a seasonal window spanning the period") {
  const TimeSeries s(counting(36), 12);
  RobustStlConfig config;
  config.season_half_window = 6;  // window 13 > period 12
  try {
    robuststl::validate_config(config, s);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WindowExceedsPeriod);
  }
  config.season_half_window = 5;
  CHECK_NOTHROW(robuststl::validate_config(config, s));
}

TEST_CASE("config validation rejects non-positive bandwidths") {
  const TimeSeries s(counting(10), 3);
  for (int which = 0; which < 4; ++which) {
    RobustStlConfig config;
    (which == 0   ? config.denoise_delta_d
     : which == 1 ? config.denoise_delta_i
     : which == 2 ? config.season_delta_d
                  : config.season_delta_i) = 0.0;
    try {
      robuststl::validate_config(config, s);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonPositiveBandwidth);
    }
  }
}

TEST_CASE("config validation rejects negative penalties and empty budgets") {
  const TimeSeries s(counting(10), 3);
  RobustStlConfig config;
  config.lambda1 = -0.5;
  CHECK_THROWS_AS(robuststl::validate_config(config, s), Error);
  config = RobustStlConfig{};
  config.season_neighborhood_periods = 0;
  CHECK_THROWS_AS(robuststl::validate_config(config, s), Error);
  config = RobustStlConfig{};
  config.max_outer_iterations = 0;
  CHECK_THROWS_AS(robuststl::validate_config(config, s), Error);
  config = RobustStlConfig{};
  config.outer_tolerance = 0.0;
  CHECK_THROWS_AS(robuststl::validate_config(config, s), Error);
  config = RobustStlConfig{};
  config.solver.max_iterations = 0;
  CHECK_THROWS_AS(robuststl::validate_config(config, s), Error);
}

TEST_CASE("mean and sample standard deviation behave on known data") {
  const std::vector<double> v{2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0};
  CHECK(robuststl::mean(v) == doctest::Approx(5.0));
  // Sum of squared deviations is 32, over n-1 = 7.
  CHECK(robuststl::sample_std(v) ==
        doctest::Approx(std::sqrt(32.0 / 7.0)).epsilon(1e-12));
  CHECK(robuststl::sample_std({3.0, 3.0, 3.0}) == doctest::Approx(0.0));
}

TEST_CASE("robust noise scale recovers sigma and shrugs off structure") {
  std::mt19937_64 rng(314);
  std::normal_distribution<double> gauss(0.0, 0.7);
  std::vector<double> noise(4000);
  for (double& v : noise) v = gauss(rng);
  const double plain = robuststl::robust_noise_scale(noise);
  CHECK(plain == doctest::Approx(0.7).epsilon(0.08));

  // A slow ramp moves every successive difference by a constant far below
  // sigma, so the estimate barely budges.
  std::vector<double> ramped = noise;
  for (std::size_t i = 0; i < ramped.size(); ++i) {
    ramped[i] += 0.01 * static_cast<double>(i);
  }
  CHECK(robuststl::robust_noise_scale(ramped) ==
        doctest::Approx(plain).epsilon(0.05));

  // Five percent of the points replaced by large spikes shifts at most ten
  // percent of the differences, nowhere near the median.
  std::vector<double> spiked = noise;
  for (std::size_t i = 0; i < spiked.size(); i += 20) spiked[i] += 25.0;
  CHECK(robuststl::robust_noise_scale(spiked) ==
        doctest::Approx(plain).epsilon(0.15));

  CHECK(robuststl::robust_noise_scale({5.0, 5.0, 5.0, 5.0}) == 0.0);
  CHECK(robuststl::robust_noise_scale({1.0}) == 0.0);
  CHECK(robuststl::robust_noise_scale({}) == 0.0);
}

TEST_CASE("errors carry their code and a prefixed message") {
  const Error e(ErrorCode::EmptyWindow, "nothing to filter");
  CHECK(e.code() == ErrorCode::EmptyWindow);
  CHECK(std::string(e.what()).find("nothing to filter") != std::string::npos);
  CHECK(std::string(e.what()).find("EmptyWindow") != std::string::npos);
}
