#include "robuststl/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace robuststl {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::PeriodTooShort: return "PeriodTooShort";
    case ErrorCode::SeriesTooShort: return "SeriesTooShort";
    case ErrorCode::WindowExceedsPeriod: return "WindowExceedsPeriod";
    case ErrorCode::NonPositiveBandwidth: return "NonPositiveBandwidth";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::EmptyWindow: return "EmptyWindow";
    case ErrorCode::NoValidNeighborhood: return "NoValidNeighborhood";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::SolverDidNotConverge: return "SolverDidNotConverge";
    case ErrorCode::SingularSystem: return "SingularSystem";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "UnknownError";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

TimeSeries::TimeSeries(std::vector<double> values, std::size_t period)
    : values_(std::move(values)), period_(period) {
  if (period_ < 2) {
    throw Error(ErrorCode::PeriodTooShort,
                "period must be at least 2, got " + std::to_string(period_));
  }
  const std::size_t min_len = 2 * period_ + 1;
  if (values_.size() < min_len) {
    std::ostringstream os;
    os << "series of length " << values_.size() << " too short for period "
       << period_ << " (need at least " << min_len << " samples)";
    throw Error(ErrorCode::SeriesTooShort, os.str());
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(ErrorCode::NonFiniteValue,
                  "non-finite value at position " + std::to_string(i + 1));
    }
  }
}

namespace {

void check_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw Error(ErrorCode::NonPositiveBandwidth,
                std::string(name) + " must be strictly positive");
  }
}

}  // namespace

const RobustStlConfig& validate_config(const RobustStlConfig& config,
                                       const TimeSeries& series) {
  if (!(config.lambda1 >= 0.0) || !(config.lambda2 >= 0.0)) {
    throw Error(ErrorCode::InvalidConfig,
                "penalties lambda1/lambda2 must be nonnegative");
  }
  check_positive(config.denoise_delta_d, "denoise_delta_d");
  check_positive(config.denoise_delta_i, "denoise_delta_i");
  check_positive(config.season_delta_d, "season_delta_d");
  check_positive(config.season_delta_i, "season_delta_i");
  if (config.season_neighborhood_periods < 1) {
    throw Error(ErrorCode::InvalidConfig,
                "season_neighborhood_periods must be at least 1");
  }
  const std::size_t window = 2 * config.season_half_window + 1;
  if (window > series.period()) {
    std::ostringstream os;
    os << "seasonal window 2*" << config.season_half_window << "+1 = " << window
       << " exceeds period " << series.period();
    throw Error(ErrorCode::WindowExceedsPeriod, os.str());
  }
  if (config.max_outer_iterations < 1) {
    throw Error(ErrorCode::InvalidConfig,
                "max_outer_iterations must be positive");
  }
  if (!(config.outer_tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "outer_tolerance must be positive");
  }
  if (config.solver.max_iterations < 1) {
    throw Error(ErrorCode::InvalidConfig,
                "solver.max_iterations must be positive");
  }
  if (!(config.solver.rel_tolerance > 0.0) ||
      !(config.solver.abs_tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidConfig, "solver tolerances must be positive");
  }
  return config;
}

double mean(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double sample_std(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double robust_noise_scale(const std::vector<double>& values) {
  if (values.size() < 2) return 0.0;
  std::vector<double> diffs(values.size() - 1);
  for (std::size_t i = 0; i + 1 < values.size(); ++i) {
    diffs[i] = std::abs(values[i + 1] - values[i]);
  }
  const std::size_t mid = diffs.size() / 2;
  std::nth_element(diffs.begin(), diffs.begin() + mid, diffs.end());
  double med = diffs[mid];
  if (diffs.size() % 2 == 0) {
    // Lower neighbor of the middle element for an even-length median.
    const double lower =
        *std::max_element(diffs.begin(), diffs.begin() + mid);
    med = 0.5 * (med + lower);
  }
  // For Gaussian noise, successive differences are N(0, 2*sigma^2), and
  // the median of |N(0,1)| is 0.6745, so this rescales the median back to
  // sigma. Slow trend and sparse jumps barely move a median.
  return med / (0.6745 * std::sqrt(2.0));
}

}  // namespace robuststl
