#include "robuststl/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace robuststl::eval {
namespace {

double median_of(std::vector<double>& scratch) {
  const std::size_t n = scratch.size();
  const std::size_t mid = n / 2;
  std::nth_element(scratch.begin(), scratch.begin() + mid, scratch.end());
  double m = scratch[mid];
  if (n % 2 == 0) {
    const double lower =
        *std::max_element(scratch.begin(), scratch.begin() + mid);
    m = 0.5 * (lower + m);
  }
  return m;
}

}  // namespace

MetricReport score(const DecompositionResult& result,
                   const synth::GroundTruth& truth) {
  const std::size_t n = truth.trend.size();
  if (result.trend.size() != n || result.seasonal.size() != n ||
      truth.seasonal.size() != n) {
    throw Error(ErrorCode::LengthMismatch,
                "decomposition and ground truth must have equal lengths");
  }
  MetricReport report;
  report.trend_residuals.resize(n);
  report.season_residuals.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const double dt = result.trend[t] - truth.trend[t];
    const double ds = result.seasonal[t] - truth.seasonal[t];
    report.trend_residuals[t] = dt;
    report.season_residuals[t] = ds;
    report.trend_mse += dt * dt;
    report.trend_mae += std::abs(dt);
    report.season_mse += ds * ds;
    report.season_mae += std::abs(ds);
  }
  const double inv = 1.0 / static_cast<double>(n);
  report.trend_mse *= inv;
  report.trend_mae *= inv;
  report.season_mse *= inv;
  report.season_mae *= inv;
  return report;
}

DecompositionResult classical_baseline(const TimeSeries& series) {
  const std::vector<double>& y = series.values();
  const std::size_t n = series.size();
  const std::size_t period = series.period();
  if (n < 2 * period) {
    throw Error(ErrorCode::SeriesTooShort,
                "baseline needs at least two full periods");
  }

  // Centered moving average of width one period. An even period has no
  // centered window of exactly that width, so the usual remedy applies: a
  // T+1 window whose two end samples carry half weight. Boundary windows are
  // clipped and the surviving weights renormalized.
  const bool even = (period % 2 == 0);
  const long h = static_cast<long>(period / 2);
  const long nl = static_cast<long>(n);
  std::vector<double> ma(n);
  for (long t = 0; t < nl; ++t) {
    double acc = 0.0;
    double total = 0.0;
    const long lo = std::max(t - h, 0L);
    const long hi = std::min(t + h, nl - 1);
    for (long j = lo; j <= hi; ++j) {
      double w = 1.0;
      if (even && (j == t - h || j == t + h)) {
        w = 0.5;
      }
      acc += w * y[static_cast<std::size_t>(j)];
      total += w;
    }
    ma[static_cast<std::size_t>(t)] = acc / total;
  }

  // Seasonal shape: per-phase median of the detrended values, then centered
  // so the level stays in the trend.
  std::vector<double> tpl(period);
  std::vector<double> phase_values;
  for (std::size_t phase = 0; phase < period; ++phase) {
    phase_values.clear();
    for (std::size_t t = phase; t < n; t += period) {
      phase_values.push_back(y[t] - ma[t]);
    }
    tpl[phase] = median_of(phase_values);
  }
  double tpl_mean = 0.0;
  for (double v : tpl) tpl_mean += v;
  tpl_mean /= static_cast<double>(period);

  DecompositionResult result;
  result.trend.resize(n);
  result.seasonal.resize(n);
  result.remainder.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    result.trend[t] = ma[t] + tpl_mean;
    result.seasonal[t] = tpl[t % period] - tpl_mean;
    result.remainder[t] = y[t] - result.trend[t] - result.seasonal[t];
  }
  result.iterations_run = 1;
  result.converged = true;
  return result;
}

}  // namespace robuststl::eval
