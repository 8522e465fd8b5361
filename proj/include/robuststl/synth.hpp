#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "robuststl/core.hpp"

namespace robuststl::synth {

/// Recipe for the synthetic benchmark series: a square-wave seasonal pattern
/// with small per-period phase jitter, a piecewise-constant trend with
/// abrupt level changes, isolated spike/dip anomalies, and Gaussian noise.
/// Defaults give 15 periods of 50 samples with 10 level changes, 14
/// anomalies, and noise variance 0.1.
struct SyntheticSpec {
  std::size_t period = 50;
  std::size_t num_periods = 15;
  double seasonal_amplitude = 1.0;
  std::size_t max_shift = 2;
  std::size_t num_level_changes = 10;
  double level_change_min = 1.0;
  double level_change_max = 3.0;
  std::size_t num_anomalies = 14;
  double anomaly_min = 2.0;
  double anomaly_max = 5.0;
  double noise_variance = 0.1;
  std::uint64_t seed = 42;
};

/// The generated components, kept separately so decompositions can be scored
/// against them. Summing trend + seasonal + anomalies + noise left to right
/// reproduces the series values bit for bit.
struct GroundTruth {
  std::vector<double> trend;
  std::vector<double> seasonal;
  std::vector<double> anomalies;
  std::vector<double> noise;
};

/// Deterministic for a fixed seed. Anomaly positions are redrawn until they
/// avoid level-change points and are not adjacent to each other, so every
/// anomaly is a genuine isolated single-point event.
std::pair<TimeSeries, GroundTruth> generate(const SyntheticSpec& spec);

}  // namespace robuststl::synth
