#include "robuststl/trend.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "robuststl/lad_solver.hpp"

namespace robuststl::trend {

std::vector<double> seasonal_difference(const std::vector<double>& y_prime,
                                        std::size_t period) {
  if (period < 1) {
    throw Error(ErrorCode::PeriodTooShort, "period must be at least 1");
  }
  if (y_prime.size() < period + 1) {
    throw Error(ErrorCode::SeriesTooShort,
                "seasonal differencing needs more than one period of data");
  }
  std::vector<double> g(y_prime.size() - period);
  for (std::size_t i = 0; i < g.size(); ++i) {
    g[i] = y_prime[i + period] - y_prime[i];
  }
  return g;
}

SparseLinearSystem::SparseLinearSystem(const std::vector<double>& g,
                                       std::size_t n, std::size_t period,
                                       double lambda1, double lambda2)
    : n_(n), period_(period), lambda1_(lambda1), lambda2_(lambda2) {
  if (period < 1 || n < period + 1 || n < 2) {
    throw Error(ErrorCode::DimensionMismatch,
                "system needs n >= period + 1 and n >= 2");
  }
  if (g.size() != n - period) {
    throw Error(ErrorCode::DimensionMismatch,
                "difference vector length must be n - period, got " +
                    std::to_string(g.size()));
  }
  if (lambda1 < 0.0 || lambda2 < 0.0) {
    throw Error(ErrorCode::InvalidConfig, "penalties must be nonnegative");
  }
  if (!std::all_of(g.begin(), g.end(),
                   [](double v) { return std::isfinite(v); })) {
    throw Error(ErrorCode::NonFiniteValue,
                "difference vector contains a non-finite value");
  }
  q_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(rows()));
  for (std::size_t i = 0; i < g.size(); ++i) {
    q_(static_cast<Eigen::Index>(i)) = g[i];
  }
}

std::size_t SparseLinearSystem::nnz() const noexcept {
  return (n_ - period_) * period_ + (n_ - 1) + 2 * (n_ - 2);
}

Eigen::VectorXd SparseLinearSystem::apply(const Eigen::VectorXd& x) const {
  if (x.size() != static_cast<Eigen::Index>(cols())) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector length does not match system columns");
  }
  const std::size_t band_rows = n_ - period_;
  const std::size_t diff_rows = n_ - 2;
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows()));

  // M block: y_r = sum of x_r..x_{r+T-1}, via prefix sums.
  std::vector<double> prefix(cols() + 1, 0.0);
  for (std::size_t j = 0; j < cols(); ++j) {
    prefix[j + 1] = prefix[j] + x(static_cast<Eigen::Index>(j));
  }
  for (std::size_t r = 0; r < band_rows; ++r) {
    y(static_cast<Eigen::Index>(r)) = prefix[r + period_] - prefix[r];
  }
  // Identity block.
  for (std::size_t j = 0; j < cols(); ++j) {
    y(static_cast<Eigen::Index>(band_rows + j)) =
        lambda1_ * x(static_cast<Eigen::Index>(j));
  }
  // Difference block: row r maps to x_{r+1} - x_r.
  const std::size_t diff_base = band_rows + cols();
  for (std::size_t r = 0; r < diff_rows; ++r) {
    y(static_cast<Eigen::Index>(diff_base + r)) =
        lambda2_ * (x(static_cast<Eigen::Index>(r + 1)) -
                    x(static_cast<Eigen::Index>(r)));
  }
  return y;
}

Eigen::VectorXd SparseLinearSystem::apply_transpose(
    const Eigen::VectorXd& y) const {
  if (y.size() != static_cast<Eigen::Index>(rows())) {
    throw Error(ErrorCode::DimensionMismatch,
                "vector length does not match system rows");
  }
  const std::size_t band_rows = n_ - period_;
  const std::size_t diff_rows = n_ - 2;
  const std::size_t diff_base = band_rows + cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cols()));

  // M^T: column j receives rows max(0, j-T+1)..min(j, band_rows-1).
  std::vector<double> prefix(band_rows + 1, 0.0);
  for (std::size_t r = 0; r < band_rows; ++r) {
    prefix[r + 1] = prefix[r] + y(static_cast<Eigen::Index>(r));
  }
  for (std::size_t j = 0; j < cols(); ++j) {
    const std::size_t lo = (j + 1 > period_) ? j + 1 - period_ : 0;
    const std::size_t hi = std::min(j, band_rows - 1);
    if (lo <= hi && band_rows > 0) {
      x(static_cast<Eigen::Index>(j)) += prefix[hi + 1] - prefix[lo];
    }
  }
  for (std::size_t j = 0; j < cols(); ++j) {
    x(static_cast<Eigen::Index>(j)) +=
        lambda1_ * y(static_cast<Eigen::Index>(band_rows + j));
  }
  for (std::size_t r = 0; r < diff_rows; ++r) {
    const double v = lambda2_ * y(static_cast<Eigen::Index>(diff_base + r));
    x(static_cast<Eigen::Index>(r)) -= v;
    x(static_cast<Eigen::Index>(r + 1)) += v;
  }
  return x;
}

double SparseLinearSystem::objective(const Eigen::VectorXd& x) const {
  return (apply(x) - q_).lpNorm<1>();
}

Eigen::SparseMatrix<double> SparseLinearSystem::to_sparse() const {
  const std::size_t band_rows = n_ - period_;
  const std::size_t diff_rows = n_ - 2;
  const std::size_t diff_base = band_rows + cols();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(nnz());
  for (std::size_t r = 0; r < band_rows; ++r) {
    for (std::size_t j = r; j < r + period_; ++j) {
      triplets.emplace_back(static_cast<int>(r), static_cast<int>(j), 1.0);
    }
  }
  for (std::size_t j = 0; j < cols(); ++j) {
    triplets.emplace_back(static_cast<int>(band_rows + j), static_cast<int>(j),
                          lambda1_);
  }
  for (std::size_t r = 0; r < diff_rows; ++r) {
    triplets.emplace_back(static_cast<int>(diff_base + r), static_cast<int>(r),
                          -lambda2_);
    triplets.emplace_back(static_cast<int>(diff_base + r),
                          static_cast<int>(r + 1), lambda2_);
  }
  Eigen::SparseMatrix<double> P(static_cast<Eigen::Index>(rows()),
                                static_cast<Eigen::Index>(cols()));
  P.setFromTriplets(triplets.begin(), triplets.end());
  return P;
}

Eigen::MatrixXd SparseLinearSystem::to_dense() const {
  return Eigen::MatrixXd(to_sparse());
}

SparseLinearSystem build_system(const std::vector<double>& g, std::size_t n,
                                std::size_t period, double lambda1,
                                double lambda2) {
  return SparseLinearSystem(g, n, period, lambda1, lambda2);
}

std::vector<double> integrate_trend_differences(
    const std::vector<double>& differences) {
  std::vector<double> levels(differences.size() + 1);
  levels[0] = 0.0;
  std::partial_sum(differences.begin(), differences.end(), levels.begin() + 1);
  return levels;
}

std::vector<double> extract_relative_trend(
    const std::vector<double>& y_prime, std::size_t period, double lambda1,
    double lambda2, const LadSolverConfig& solver_config) {
  const std::size_t n = y_prime.size();
  const std::vector<double> g = seasonal_difference(y_prime, period);
  const SparseLinearSystem system(g, n, period, lambda1, lambda2);

  const lad::LadSolution sol =
      lad::solve_l1(system.to_sparse(), system.q(), solver_config);
  std::vector<double> differences(static_cast<std::size_t>(sol.x.size()));
  for (std::size_t i = 0; i < differences.size(); ++i) {
    differences[i] = sol.x(static_cast<Eigen::Index>(i));
  }
  return integrate_trend_differences(differences);
}

}  // namespace robuststl::trend
