#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstddef>
#include <vector>

#include "robuststl/core.hpp"

namespace robuststl::trend {

/// Seasonal difference g_i = y'_{i+T} - y'_i for i = 0..N-T-1, so that in
/// 1-based terms g_t = y'_t - y'_{t-T} for t = T+1..N.
std::vector<double> seasonal_difference(const std::vector<double>& y_prime,
                                        std::size_t period);

/// The stacked design of the trend-difference objective
///
///   minimize_x ||P x - q||_1,   x = first differences of the trend,
///
/// with P = [M; lambda1*I; lambda2*D] and q = [g; 0]. M is the (N-T)x(N-1)
/// band of T consecutive ones per row (row r covers columns r..r+T-1), I is
/// the (N-1) identity, and D is the (N-2)x(N-1) first-difference band. Rows
/// whose penalty is zero are kept as zero-scaled rows so the system shape
/// never depends on the penalties.
///
/// P is never formed densely here: products walk the bands directly (the M
/// block is a sliding-window sum over prefix sums), so apply() costs O(N)
/// regardless of T.
class SparseLinearSystem {
 public:
  SparseLinearSystem(const std::vector<double>& g, std::size_t n,
                     std::size_t period, double lambda1, double lambda2);

  std::size_t rows() const noexcept { return 3 * n_ - period_ - 3; }
  std::size_t cols() const noexcept { return n_ - 1; }
  /// Structural nonzero count (N-T)*T + (N-1) + 2*(N-2); zero-scaled rows
  /// keep their structural entries.
  std::size_t nnz() const noexcept;

  const Eigen::VectorXd& q() const noexcept { return q_; }

  /// y = P x without materializing P.
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  /// x = P^T y without materializing P.
  Eigen::VectorXd apply_transpose(const Eigen::VectorXd& y) const;
  /// ||P x - q||_1 via the banded products.
  double objective(const Eigen::VectorXd& x) const;

  /// Explicit representations, for the solver (sparse) and for small-size
  /// inspection and testing (dense).
  Eigen::SparseMatrix<double> to_sparse() const;
  Eigen::MatrixXd to_dense() const;

  std::size_t series_length() const noexcept { return n_; }
  std::size_t period() const noexcept { return period_; }
  double lambda1() const noexcept { return lambda1_; }
  double lambda2() const noexcept { return lambda2_; }

 private:
  std::size_t n_;
  std::size_t period_;
  double lambda1_;
  double lambda2_;
  Eigen::VectorXd q_;
};

SparseLinearSystem build_system(const std::vector<double>& g, std::size_t n,
                                std::size_t period, double lambda1,
                                double lambda2);

/// Cumulative sum with a zero prepended: differences of length n become a
/// level series of length n+1 anchored at zero.
std::vector<double> integrate_trend_differences(
    const std::vector<double>& differences);

/// Runs the full Step-2 chain on a denoised series: seasonal difference,
/// system assembly, LAD solve for the trend differences, integration to the
/// relative trend (anchored so its first entry is 0). One-shot convenience;
/// the decomposition loop drives the pieces directly to reuse the
/// factorization across iterations.
std::vector<double> extract_relative_trend(const std::vector<double>& y_prime,
                                           std::size_t period, double lambda1,
                                           double lambda2,
                                           const LadSolverConfig& solver_config);

}  // namespace robuststl::trend
