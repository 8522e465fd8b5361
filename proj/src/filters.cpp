#include "robuststl/filters.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "robuststl/parallel.hpp"

namespace robuststl::filters {
namespace {

void check_bandwidths(double delta_d, double delta_i) {
  if (!(delta_d > 0.0) || !(delta_i > 0.0)) {
    throw Error(ErrorCode::NonPositiveBandwidth,
                "kernel bandwidths must be positive");
  }
}

void check_finite(const std::vector<double>& values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorCode::NonFiniteValue,
                  "non-finite value at position " + std::to_string(i + 1));
    }
  }
}

inline double gaussian(double distance, double delta) {
  const double z = distance / delta;
  return std::exp(-0.5 * z * z);
}

/// Normalizes raw weights in place, falling back from the given weights to
/// uniform if everything underflowed. Drops entries whose weight is exactly
/// zero so the result carries only strictly positive weights.
WeightedNeighborhood normalize(std::vector<std::size_t> indices,
                               std::vector<double> raw,
                               const std::vector<double>& index_only) {
  double total = 0.0;
  for (double w : raw) total += w;
  if (total <= 0.0) {
    raw = index_only;
    total = 0.0;
    for (double w : raw) total += w;
  }
  if (total <= 0.0) {
    raw.assign(raw.size(), 1.0);
    total = static_cast<double>(raw.size());
  }

  WeightedNeighborhood out;
  out.indices.reserve(indices.size());
  out.weights.reserve(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) {
    const double w = raw[k] / total;
    if (w > 0.0) {
      out.indices.push_back(indices[k]);
      out.weights.push_back(w);
    }
  }
  // Renormalize once more: dropping underflowed entries moves the sum off 1
  // by at most a few ulps, but the sum-to-1 invariant is tighter than that.
  double kept = 0.0;
  for (double w : out.weights) kept += w;
  for (double& w : out.weights) w /= kept;
  return out;
}

}  // namespace

WeightedNeighborhood bilateral_weights(
    std::size_t center, const std::vector<std::size_t>& candidates,
    const std::vector<double>& values, double delta_d, double delta_i) {
  check_bandwidths(delta_d, delta_i);
  if (candidates.empty()) {
    throw Error(ErrorCode::EmptyWindow, "candidate window is empty");
  }
  if (center >= values.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "center index is out of bounds");
  }
  for (std::size_t j : candidates) {
    if (j >= values.size()) {
      throw Error(ErrorCode::DimensionMismatch,
                  "candidate index is out of bounds");
    }
  }

  const double center_value = values[center];
  std::vector<double> raw(candidates.size());
  std::vector<double> index_only(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    const std::size_t j = candidates[k];
    const double index_distance = static_cast<double>(j) -
                                  static_cast<double>(center);
    const double wi = gaussian(index_distance, delta_d);
    const double wv = gaussian(values[j] - center_value, delta_i);
    index_only[k] = wi;
    raw[k] = wi * wv;
  }
  return normalize(std::vector<std::size_t>(candidates), std::move(raw),
                   index_only);
}

std::vector<double> denoise(const std::vector<double>& values,
                            std::size_t half_window, double delta_d,
                            double delta_i) {
  check_bandwidths(delta_d, delta_i);
  if (values.empty()) {
    throw Error(ErrorCode::EmptyWindow, "cannot denoise an empty series");
  }
  check_finite(values);
  if (half_window == 0) {
    return values;
  }

  const std::size_t n = values.size();
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    std::vector<std::size_t> window;
    window.reserve(2 * half_window + 1);
    for (std::size_t t = begin; t < end; ++t) {
      window.clear();
      const std::size_t lo = (t >= half_window) ? t - half_window : 0;
      const std::size_t hi = std::min(t + half_window, n - 1);
      for (std::size_t j = lo; j <= hi; ++j) {
        window.push_back(j);
      }
      const WeightedNeighborhood nb =
          bilateral_weights(t, window, values, delta_d, delta_i);
      double acc = 0.0;
      for (std::size_t k = 0; k < nb.indices.size(); ++k) {
        acc += nb.weights[k] * values[nb.indices[k]];
      }
      out[t] = acc;
    }
  });
  return out;
}

std::vector<double> denoise(const TimeSeries& series, std::size_t half_window,
                            double delta_d, double delta_i) {
  return denoise(series.values(), half_window, delta_d, delta_i);
}

WeightedNeighborhood seasonal_neighborhood(const std::vector<double>& detrended,
                                           std::size_t period,
                                           std::size_t center,
                                           std::size_t num_periods,
                                           std::size_t half_window,
                                           double delta_d, double delta_i) {
  check_bandwidths(delta_d, delta_i);
  if (period < 1) {
    throw Error(ErrorCode::PeriodTooShort, "period must be at least 1");
  }
  if (num_periods < 1) {
    throw Error(ErrorCode::InvalidConfig,
                "seasonal filter needs at least one neighborhood period");
  }
  if (2 * half_window + 1 > period) {
    throw Error(ErrorCode::WindowExceedsPeriod,
                "seasonal window 2H+1 must not exceed the period");
  }
  const std::size_t n = detrended.size();
  if (center >= n) {
    throw Error(ErrorCode::DimensionMismatch, "center index is out of bounds");
  }

  const long nl = static_cast<long>(n);
  const long h = static_cast<long>(half_window);
  const long t = static_cast<long>(center);
  const long step = static_cast<long>(period);

  // Prior anchors t - kT; a point too early for even the nearest prior
  // neighborhood to reach into the series mirrors to future anchors t + kT.
  std::vector<long> anchors;
  anchors.reserve(num_periods);
  const bool has_prior = (t - step + h >= 0);
  for (std::size_t k = 1; k <= num_periods; ++k) {
    const long offset = static_cast<long>(k) * step;
    const long anchor = has_prior ? t - offset : t + offset;
    if (anchor + h < 0 || anchor - h > nl - 1) {
      continue;  // neighborhood entirely outside the series
    }
    anchors.push_back(anchor);
  }
  if (anchors.empty()) {
    throw Error(ErrorCode::NoValidNeighborhood,
                "no seasonal neighborhood reaches the series at position " +
                    std::to_string(center + 1));
  }

  // Anchors are one period apart and 2H+1 <= T, so the clipped windows never
  // overlap; Omega can be built by plain concatenation.
  const double center_value = detrended[center];
  std::vector<std::size_t> indices;
  std::vector<double> raw;
  std::vector<double> index_only;
  for (long anchor : anchors) {
    const long lo = std::max(anchor - h, 0L);
    const long hi = std::min(anchor + h, nl - 1);
    for (long j = lo; j <= hi; ++j) {
      const double wi = gaussian(static_cast<double>(j - anchor), delta_d);
      const double wv = gaussian(detrended[static_cast<std::size_t>(j)] -
                                     center_value,
                                 delta_i);
      indices.push_back(static_cast<std::size_t>(j));
      index_only.push_back(wi);
      raw.push_back(wi * wv);
    }
  }
  return normalize(std::move(indices), std::move(raw), index_only);
}

std::vector<double> nonlocal_seasonal_filter(
    const std::vector<double>& detrended, std::size_t period,
    std::size_t num_periods, std::size_t half_window, double delta_d,
    double delta_i) {
  if (detrended.empty()) {
    throw Error(ErrorCode::EmptyWindow,
                "cannot filter an empty series");
  }
  check_finite(detrended);

  const std::size_t n = detrended.size();
  std::vector<double> out(n);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const WeightedNeighborhood nb =
          seasonal_neighborhood(detrended, period, t, num_periods, half_window,
                                delta_d, delta_i);
      double acc = 0.0;
      for (std::size_t k = 0; k < nb.indices.size(); ++k) {
        acc += nb.weights[k] * detrended[nb.indices[k]];
      }
      out[t] = acc;
    }
  });
  return out;
}

}  // namespace robuststl::filters
