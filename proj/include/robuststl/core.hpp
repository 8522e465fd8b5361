#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace robuststl {

/// Failure categories used across the library. Each maps to one named
/// contract violation; the CLI maps them onto process exit codes.
enum class ErrorCode {
  PeriodTooShort,
  SeriesTooShort,
  WindowExceedsPeriod,
  NonPositiveBandwidth,
  NonFiniteValue,
  InvalidConfig,
  EmptyWindow,
  NoValidNeighborhood,
  DimensionMismatch,
  SolverDidNotConverge,
  SingularSystem,
  LengthMismatch,
  InvalidSpec,
  ParseError,
  IoError,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// An evenly sampled series of observations together with its declared
/// seasonal period T (samples per cycle). Immutable after construction.
///
/// Construction enforces: T >= 2, N >= 2T+1 (one full period of history for
/// the seasonal difference plus one more for the non-local filter), and all
/// values finite. Missing data is not supported.
class TimeSeries {
 public:
  TimeSeries(std::vector<double> values, std::size_t period);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::size_t period() const noexcept { return period_; }

 private:
  std::vector<double> values_;
  std::size_t period_;
};

/// Iteration controls for the L1 approximation solver. One iteration is one
/// reweighted least-squares solve; convergence is declared when the solution
/// iterate moves by less than abs_tolerance + rel_tolerance * |x|_inf.
struct LadSolverConfig {
  int max_iterations = 500;
  double rel_tolerance = 1e-6;
  double abs_tolerance = 1e-8;
};

/// All tunables of the decomposition.
struct RobustStlConfig {
  /// First-difference penalty on the trend (level-shift sparsity).
  double lambda1 = 10.0;
  /// Second-difference penalty on the trend (piecewise-linear smoothness).
  double lambda2 = 0.5;

  /// Bilateral denoising window half-width H_d; 0 disables denoising.
  std::size_t denoise_half_window = 3;
  /// Index bandwidth sized so the whole +-H_d window carries real weight.
  double denoise_delta_d = 2.0;
  /// Value bandwidth in data units; size it to the noise level.
  double denoise_delta_i = 1.0;

  /// Number of previous-period neighborhoods K used by the seasonal filter.
  std::size_t season_neighborhood_periods = 2;
  /// Neighborhood half-width H_s around each same-phase anchor.
  /// Must satisfy 2*H_s + 1 <= T.
  std::size_t season_half_window = 0;
  /// Index bandwidth wide enough that samples a few positions off the
  /// anchor keep weight, which is what lets the filter track a seasonal
  /// pattern whose phase drifts between periods.
  double season_delta_d = 3.0;
  /// Value bandwidth in data units; size it below the seasonal amplitude
  /// so samples from the wrong part of the cycle are suppressed.
  double season_delta_i = 0.6;

  int max_outer_iterations = 10;
  /// Relative outer-loop tolerance, scaled by (1 + max|y|).
  double outer_tolerance = 1e-5;

  LadSolverConfig solver;
};

/// Additive decomposition aligned with the input series:
/// trend + seasonal + remainder reconstructs the observations, and the
/// seasonal component has (numerically) zero mean over whole periods.
struct DecompositionResult {
  std::vector<double> trend;
  std::vector<double> seasonal;
  std::vector<double> remainder;
  int iterations_run = 0;
  bool converged = false;
};

/// Checks every config invariant against the series (window vs. period,
/// positive bandwidths, nonnegative penalties, positive iteration budgets).
/// Returns the config unchanged on success; throws Error naming the
/// violated constraint otherwise. Deterministic and side-effect free.
const RobustStlConfig& validate_config(const RobustStlConfig& config,
                                       const TimeSeries& series);

double mean(const std::vector<double>& values);
double sample_std(const std::vector<double>& values);

/// Noise level estimated from the median absolute successive difference,
/// rescaled so Gaussian noise of standard deviation s returns ~s. Unlike
/// sample_std this ignores trend, seasonality wider than one sample, and
/// sparse outliers, so it suits sizing the value kernels. Returns 0 for
/// series whose majority of successive differences are 0 (e.g. constants).
double robust_noise_scale(const std::vector<double>& values);

}  // namespace robuststl
