#pragma once

#include <cstddef>
#include <vector>

#include "robuststl/core.hpp"

namespace robuststl::filters {

/// A set of sample positions with their normalized filter weights. Weights
/// are strictly positive and sum to 1 within 1e-12; candidates whose kernel
/// weight underflows to zero are dropped rather than carried at weight 0.
/// Indices are 0-based positions into the series the neighborhood was built
/// from.
struct WeightedNeighborhood {
  std::vector<std::size_t> indices;
  std::vector<double> weights;
};

/// Bilateral weights over an explicit candidate window: each candidate j is
/// weighted by exp(-(j-center)^2 / 2*delta_d^2) times
/// exp(-(values[j]-values[center])^2 / 2*delta_i^2), then the set is
/// normalized. If every product underflows, the index kernel alone is used;
/// if that also underflows, weights are uniform.
WeightedNeighborhood bilateral_weights(
    std::size_t center, const std::vector<std::size_t>& candidates,
    const std::vector<double>& values, double delta_d, double delta_i);

/// Bilateral denoising: each output point is the weighted average of the
/// window {t-H..t+H} clipped to the series, with bilateral weights centered
/// at t. half_window = 0 returns the input unchanged.
std::vector<double> denoise(const std::vector<double>& values,
                            std::size_t half_window, double delta_d,
                            double delta_i);
std::vector<double> denoise(const TimeSeries& series, std::size_t half_window,
                            double delta_d, double delta_i);

/// The neighborhood the seasonal filter uses for one output point: up to
/// num_periods anchor points one period apart before `center`, each
/// contributing the 2*half_window+1 samples around it (clipped to the
/// series). Points too early to have any prior anchor in range take their
/// anchors from future periods instead. The index kernel measures phase
/// distance to the anchor; the value kernel compares each sample against the
/// value at `center`, which is what makes a corrupted neighbor lose its
/// weight instead of keeping it.
WeightedNeighborhood seasonal_neighborhood(const std::vector<double>& detrended,
                                           std::size_t period,
                                           std::size_t center,
                                           std::size_t num_periods,
                                           std::size_t half_window,
                                           double delta_d, double delta_i);

/// Applies the seasonal neighborhood average at every point, producing the
/// raw seasonal estimate. Output points are independent; the loop runs in
/// parallel without changing any output bit.
std::vector<double> nonlocal_seasonal_filter(
    const std::vector<double>& detrended, std::size_t period,
    std::size_t num_periods, std::size_t half_window, double delta_d,
    double delta_i);

}  // namespace robuststl::filters
