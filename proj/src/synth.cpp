#include "robuststl/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <string>

namespace robuststl::synth {
namespace {

void validate(const SyntheticSpec& spec) {
  if (spec.period < 2) {
    throw Error(ErrorCode::InvalidSpec, "period must be at least 2");
  }
  if (spec.num_periods < 3) {
    throw Error(ErrorCode::InvalidSpec,
                "need at least 3 periods so the series is long enough to "
                "decompose");
  }
  const std::size_t n = spec.period * spec.num_periods;
  if (spec.num_level_changes + spec.num_anomalies >= n) {
    throw Error(ErrorCode::InvalidSpec,
                "level changes plus anomalies must be fewer than the sample "
                "count");
  }
  if (4 * spec.max_shift >= spec.period) {
    throw Error(ErrorCode::InvalidSpec,
                "max_shift must stay below a quarter period");
  }
  if (spec.noise_variance < 0.0) {
    throw Error(ErrorCode::InvalidSpec, "noise variance must be nonnegative");
  }
  if (spec.seasonal_amplitude < 0.0) {
    throw Error(ErrorCode::InvalidSpec,
                "seasonal amplitude must be nonnegative");
  }
  if (spec.level_change_min < 0.0 ||
      spec.level_change_max < spec.level_change_min) {
    throw Error(ErrorCode::InvalidSpec,
                "level change magnitude range must be ordered and "
                "nonnegative");
  }
  if (spec.anomaly_min < 0.0 || spec.anomaly_max < spec.anomaly_min) {
    throw Error(ErrorCode::InvalidSpec,
                "anomaly magnitude range must be ordered and nonnegative");
  }
}

/// 50% duty-cycle square wave of one period, exactly zero-mean. For odd
/// periods the extra high sample would bias the mean, so the template mean
/// is subtracted (a no-op for even periods).
std::vector<double> square_template(std::size_t period, double amplitude) {
  std::vector<double> tpl(period);
  const std::size_t high = (period + 1) / 2;
  for (std::size_t i = 0; i < period; ++i) {
    tpl[i] = (i < high) ? amplitude : -amplitude;
  }
  double mean = 0.0;
  for (double v : tpl) mean += v;
  mean /= static_cast<double>(period);
  for (double& v : tpl) v -= mean;
  return tpl;
}

}  // namespace

std::pair<TimeSeries, GroundTruth> generate(const SyntheticSpec& spec) {
  validate(spec);
  const std::size_t period = spec.period;
  const std::size_t n = period * spec.num_periods;
  std::mt19937_64 rng(spec.seed);

  GroundTruth truth;
  truth.trend.assign(n, 0.0);
  truth.seasonal.assign(n, 0.0);
  truth.anomalies.assign(n, 0.0);
  truth.noise.assign(n, 0.0);

  // Seasonal: tile the template with an independent circular phase shift
  // per period. A circular shift permutes the template values, so each
  // period keeps the template's zero mean.
  const std::vector<double> tpl =
      square_template(period, spec.seasonal_amplitude);
  const long max_shift = static_cast<long>(spec.max_shift);
  std::uniform_int_distribution<long> shift_dist(-max_shift, max_shift);
  for (std::size_t p = 0; p < spec.num_periods; ++p) {
    const long shift = (max_shift > 0) ? shift_dist(rng) : 0;
    for (std::size_t i = 0; i < period; ++i) {
      const long src = (static_cast<long>(i) + shift +
                        static_cast<long>(period)) %
                       static_cast<long>(period);
      truth.seasonal[p * period + i] = tpl[static_cast<std::size_t>(src)];
    }
  }

  // Trend: cumulative level changes at distinct positions in [1, n-1].
  std::set<std::size_t> change_points;
  if (spec.num_level_changes > 0) {
    std::uniform_int_distribution<std::size_t> pos_dist(1, n - 1);
    while (change_points.size() < spec.num_level_changes) {
      change_points.insert(pos_dist(rng));
    }
    std::uniform_real_distribution<double> mag_dist(spec.level_change_min,
                                                    spec.level_change_max);
    std::bernoulli_distribution sign_dist(0.5);
    double level = 0.0;
    auto next_change = change_points.begin();
    for (std::size_t t = 0; t < n; ++t) {
      if (next_change != change_points.end() && *next_change == t) {
        const double magnitude = mag_dist(rng);
        level += sign_dist(rng) ? magnitude : -magnitude;
        ++next_change;
      }
      truth.trend[t] = level;
    }
  }

  // Anomalies: isolated single points, never at a level-change position and
  // never adjacent to another anomaly.
  if (spec.num_anomalies > 0) {
    std::uniform_int_distribution<std::size_t> pos_dist(0, n - 1);
    std::uniform_real_distribution<double> mag_dist(spec.anomaly_min,
                                                    spec.anomaly_max);
    std::bernoulli_distribution sign_dist(0.5);
    std::set<std::size_t> placed;
    for (std::size_t a = 0; a < spec.num_anomalies; ++a) {
      std::size_t pos = 0;
      for (;;) {
        pos = pos_dist(rng);
        const bool on_change = change_points.count(pos) > 0;
        const bool near_existing =
            placed.count(pos) > 0 || (pos > 0 && placed.count(pos - 1) > 0) ||
            placed.count(pos + 1) > 0;
        if (!on_change && !near_existing) break;
      }
      placed.insert(pos);
      const double magnitude = mag_dist(rng);
      truth.anomalies[pos] = sign_dist(rng) ? magnitude : -magnitude;
    }
  }

  if (spec.noise_variance > 0.0) {
    std::normal_distribution<double> noise_dist(
        0.0, std::sqrt(spec.noise_variance));
    for (std::size_t t = 0; t < n; ++t) {
      truth.noise[t] = noise_dist(rng);
    }
  }

  std::vector<double> values(n);
  for (std::size_t t = 0; t < n; ++t) {
    values[t] = truth.trend[t] + truth.seasonal[t] + truth.anomalies[t] +
                truth.noise[t];
  }
  return {TimeSeries(std::move(values), period), std::move(truth)};
}

}  // namespace robuststl::synth
