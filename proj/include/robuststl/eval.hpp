#pragma once

#include <vector>

#include "robuststl/core.hpp"
#include "robuststl/synth.hpp"

namespace robuststl::eval {

/// Accuracy of a decomposition against ground truth, scored over every
/// point. Residual vectors (estimate minus truth) are kept for inspection.
struct MetricReport {
  double trend_mse = 0.0;
  double trend_mae = 0.0;
  double season_mse = 0.0;
  double season_mae = 0.0;
  std::vector<double> trend_residuals;
  std::vector<double> season_residuals;
};

MetricReport score(const DecompositionResult& result,
                   const synth::GroundTruth& truth);

/// Classical additive decomposition used as the comparison point: centered
/// moving average of width one period for the trend (even periods use the
/// standard T+1 window with half-weighted ends; windows shrink and
/// renormalize at the boundaries), then a per-phase median of the detrended
/// values for the seasonal shape. The median template's mean is folded into
/// the trend so the seasonal component is centered.
DecompositionResult classical_baseline(const TimeSeries& series);

}  // namespace robuststl::eval
