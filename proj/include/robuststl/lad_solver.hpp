#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <vector>

#include "robuststl/core.hpp"

namespace robuststl::lad {

/// Outcome of an L1 approximation solve: minimizer of ||A x - b||_1 plus
/// bookkeeping. `residual_history[k]` is the best objective seen through
/// iteration k+1; it is non-increasing by construction and starts at or
/// below the objective of the trivial point x = 0.
///
/// `dual` is a subgradient optimality certificate: it lies in [-1,1]
/// componentwise, equals sign(residual) wherever the residual is clearly
/// nonzero, and satisfies ||A^T dual||_inf ~ 0 at the optimum. Empty for
/// lp_reference.
struct LadSolution {
  Eigen::VectorXd x;
  double objective = 0.0;
  int iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;
  Eigen::VectorXd dual;
};

/// Thrown when the iteration budget runs out before the successive-iterate
/// change meets the configured tolerances. Carries the best iterate found.
class SolverDidNotConverge : public Error {
 public:
  SolverDidNotConverge(const std::string& message, LadSolution best);
  const LadSolution& best() const noexcept { return best_; }

 private:
  LadSolution best_;
};

/// Minimizes ||A x - b||_1 by iteratively reweighted least squares on a
/// Huber-smoothed objective. Each iteration factorizes the weighted normal
/// matrix A^T W A and solves for x; the smoothing width shrinks as the
/// residuals settle, down to a floor of 1e-8 * |b|_inf, so the result
/// matches the exact minimum far beyond the configured tolerances.
/// Requires A to have full column rank (checked at construction).
///
/// Each solve call is independent and keeps its own scratch state; a single
/// solver instance may serve concurrent calls.
class L1Solver {
 public:
  explicit L1Solver(const Eigen::SparseMatrix<double>& A);

  /// Throws SolverDidNotConverge on budget exhaustion (best iterate inside).
  LadSolution solve(const Eigen::VectorXd& b,
                    const LadSolverConfig& config = {}) const;

  Eigen::Index rows() const noexcept { return A_.rows(); }
  Eigen::Index cols() const noexcept { return A_.cols(); }

 private:
  Eigen::SparseMatrix<double> A_;
  Eigen::SparseMatrix<double> At_;
};

LadSolution solve_l1(const Eigen::SparseMatrix<double>& A,
                     const Eigen::VectorXd& b,
                     const LadSolverConfig& config = {});
LadSolution solve_l1(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const LadSolverConfig& config = {});

/// Exact reference minimizer of ||A x - b||_1 for small dense problems
/// (rows*cols up to ~1e4), used as a test oracle and for debugging.
/// Solves the equivalent linear program with a full-tableau primal simplex
/// under Bland's rule, so it terminates at a true vertex optimum.
LadSolution lp_reference(const Eigen::MatrixXd& A, const Eigen::VectorXd& b);

}  // namespace robuststl::lad
