#include "robuststl/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "robuststl/filters.hpp"
#include "robuststl/lad_solver.hpp"
#include "robuststl/trend.hpp"

namespace robuststl::pipeline {

Adjusted adjust(const std::vector<double>& relative_trend,
                const std::vector<double>& raw_season,
                const std::vector<double>& y, std::size_t period) {
  const std::size_t n = y.size();
  if (relative_trend.size() != n || raw_season.size() != n) {
    throw Error(ErrorCode::LengthMismatch,
                "component vectors must match the series length");
  }
  if (period < 1 || period > n) {
    throw Error(ErrorCode::PeriodTooShort,
                "period must lie in [1, series length]");
  }

  // Mean of the raw seasonal estimate over the whole periods only, so a
  // trailing partial period cannot bias the level split.
  const std::size_t cover = period * (n / period);
  double tau1 = 0.0;
  for (std::size_t t = 0; t < cover; ++t) {
    tau1 += raw_season[t];
  }
  tau1 /= static_cast<double>(cover);

  Adjusted out;
  out.tau1 = tau1;
  out.trend.resize(n);
  out.seasonal.resize(n);
  out.remainder.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    out.trend[t] = relative_trend[t] + tau1;
    out.seasonal[t] = raw_season[t] - tau1;
    out.remainder[t] = y[t] - out.seasonal[t] - out.trend[t];
  }
  return out;
}

DecompositionAborted::DecompositionAborted(const std::string& message,
                                           DecompositionResult partial,
                                           IterationDiagnostics diagnostics)
    : Error(ErrorCode::SolverDidNotConverge, message),
      partial_(std::move(partial)),
      diagnostics_(std::move(diagnostics)) {}

DecompositionRun decompose(const TimeSeries& series,
                           const RobustStlConfig& config) {
  validate_config(config, series);

  const std::vector<double>& y = series.values();
  const std::size_t n = series.size();
  const std::size_t period = series.period();

  double max_abs_y = 0.0;
  for (double v : y) max_abs_y = std::max(max_abs_y, std::abs(v));
  const double threshold = config.outer_tolerance * (1.0 + max_abs_y);

  // The design matrix of the trend solve depends only on shape and
  // penalties, never on the data, so one factorization serves every outer
  // iteration; only the right-hand side changes.
  const std::vector<double> zero_g(n - period, 0.0);
  const trend::SparseLinearSystem proto(zero_g, n, period, config.lambda1,
                                        config.lambda2);
  const lad::L1Solver solver(proto.to_sparse());

  DecompositionResult total;
  total.trend.assign(n, 0.0);
  total.seasonal.assign(n, 0.0);
  total.remainder = y;
  IterationDiagnostics diagnostics;

  std::vector<double> current = y;
  for (int iteration = 1; iteration <= config.max_outer_iterations;
       ++iteration) {
    const std::vector<double> denoised =
        filters::denoise(current, config.denoise_half_window,
                         config.denoise_delta_d, config.denoise_delta_i);
    const std::vector<double> g =
        trend::seasonal_difference(denoised, period);
    const trend::SparseLinearSystem system(g, n, period, config.lambda1,
                                           config.lambda2);

    // Later outer iterations shrink the trend increments toward zero, and a
    // fixed absolute step tolerance would then demand resolution far finer
    // than anything the outer loop can use. Scale the absolute floor to the
    // right-hand side so every solve resolves the trend differences to the
    // same relative accuracy.
    LadSolverConfig solver_config = config.solver;
    solver_config.abs_tolerance =
        std::max(solver_config.abs_tolerance,
                 config.solver.rel_tolerance *
                     system.q().lpNorm<Eigen::Infinity>());

    lad::LadSolution sol;
    try {
      sol = solver.solve(system.q(), solver_config);
    } catch (const lad::SolverDidNotConverge& e) {
      total.iterations_run = iteration - 1;
      total.converged = false;
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "trend solve failed to converge in outer iteration %d: %s",
                    iteration, e.what());
      throw DecompositionAborted(buf, std::move(total),
                                 std::move(diagnostics));
    }

    std::vector<double> differences(static_cast<std::size_t>(sol.x.size()));
    for (std::size_t i = 0; i < differences.size(); ++i) {
      differences[i] = sol.x(static_cast<Eigen::Index>(i));
    }
    const std::vector<double> relative =
        trend::integrate_trend_differences(differences);

    std::vector<double> detrended(n);
    for (std::size_t t = 0; t < n; ++t) {
      detrended[t] = denoised[t] - relative[t];
    }
    const std::vector<double> raw_season = filters::nonlocal_seasonal_filter(
        detrended, period, config.season_neighborhood_periods,
        config.season_half_window, config.season_delta_d,
        config.season_delta_i);

    const Adjusted adj = adjust(relative, raw_season, current, period);

    double max_trend_change = 0.0;
    double max_seasonal_change = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      total.trend[t] += adj.trend[t];
      total.seasonal[t] += adj.seasonal[t];
      max_trend_change = std::max(max_trend_change, std::abs(adj.trend[t]));
      max_seasonal_change =
          std::max(max_seasonal_change, std::abs(adj.seasonal[t]));
    }
    diagnostics.push_back({max_trend_change, max_seasonal_change,
                           sol.objective, adj.tau1});
    total.iterations_run = iteration;

    current = adj.remainder;
    if (std::max(max_trend_change, max_seasonal_change) < threshold) {
      total.converged = true;
      break;
    }
  }

  // Remainder defined as the residual against the original input, so the
  // three components add back to y without accumulated rounding from the
  // iteration history.
  for (std::size_t t = 0; t < n; ++t) {
    total.remainder[t] = y[t] - total.trend[t] - total.seasonal[t];
  }
  return {std::move(total), std::move(diagnostics)};
}

}  // namespace robuststl::pipeline
