#pragma once

#include <cstddef>
#include <vector>

#include "robuststl/core.hpp"

namespace robuststl::pipeline {

/// One outer iteration of the decomposition loop, for observability: how
/// much the accumulated trend and seasonal estimates moved, the LAD
/// objective reached by the trend solve, and the seasonal-mean level folded
/// into the trend that round.
struct IterationRecord {
  double max_trend_change = 0.0;
  double max_seasonal_change = 0.0;
  double solver_objective = 0.0;
  double tau1 = 0.0;
};

using IterationDiagnostics = std::vector<IterationRecord>;

/// Output of the mean-adjustment step that pins down the decomposition's
/// additive split: the raw seasonal estimate has its mean over the whole
/// periods removed and that level (tau1) moves into the trend; the remainder
/// is defined as input minus trend minus seasonal so reconstruction is exact
/// by construction.
struct Adjusted {
  std::vector<double> trend;
  std::vector<double> seasonal;
  std::vector<double> remainder;
  double tau1 = 0.0;
};

Adjusted adjust(const std::vector<double>& relative_trend,
                const std::vector<double>& raw_season,
                const std::vector<double>& y, std::size_t period);

/// Thrown when the trend solver inside decompose() exhausts its iteration
/// budget. Carries the decomposition accumulated over the completed outer
/// iterations plus their diagnostics, so callers can inspect how far the run
/// got.
class DecompositionAborted : public Error {
 public:
  DecompositionAborted(const std::string& message, DecompositionResult partial,
                       IterationDiagnostics diagnostics);
  const DecompositionResult& partial() const noexcept { return partial_; }
  const IterationDiagnostics& diagnostics() const noexcept {
    return diagnostics_;
  }

 private:
  DecompositionResult partial_;
  IterationDiagnostics diagnostics_;
};

struct DecompositionRun {
  DecompositionResult result;
  IterationDiagnostics diagnostics;
};

/// Full decomposition: denoise, extract the relative trend by LAD, filter
/// the seasonal component, adjust means; then repeat the chain on the
/// remainder, accumulating the trend/seasonal increments, until the largest
/// increment drops below outer_tolerance * (1 + max|y|) or the outer budget
/// runs out. Budget exhaustion of the outer loop is reported through
/// converged = false, not an exception; only a failed inner solve throws
/// (DecompositionAborted).
DecompositionRun decompose(const TimeSeries& series,
                           const RobustStlConfig& config);

}  // namespace robuststl::pipeline
