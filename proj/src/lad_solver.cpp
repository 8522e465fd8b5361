#include "robuststl/lad_solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace robuststl::lad {
namespace {

double l1_norm(const Eigen::VectorXd& v) { return v.lpNorm<1>(); }

/// Subgradient certificate at a candidate minimizer. Residuals clearly away
/// from zero force s_i = sign(r_i); the remaining entries are free in
/// [-1, 1] and are chosen to minimize ||A^T s||_2, first by a
/// ridge-regularized least-squares guess and then by coordinate descent on
/// the box. At an optimum the result satisfies ||A^T s||_inf ~ 0.
Eigen::VectorXd certificate(const Eigen::SparseMatrix<double>& A,
                            const Eigen::SparseMatrix<double>& At,
                            const Eigen::VectorXd& r, double eps) {
  const Eigen::Index m = A.rows(), n = A.cols();
  const double rscale = r.lpNorm<Eigen::Infinity>();
  // Residuals shrink toward zero only down to the smoothing width, so the
  // sign/free split sits at the geometric mean of that width and the
  // residual scale, far from both clusters.
  const double theta =
      std::max(std::sqrt(eps * std::max(rscale, eps)), 10.0 * eps);

  Eigen::VectorXd s(m);
  std::vector<Eigen::Index> free_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(r(i)) >= theta) {
      s(i) = (r(i) > 0.0) ? 1.0 : -1.0;
    } else {
      s(i) = (eps > 0.0) ? r(i) / std::max(std::abs(r(i)), eps) : 0.0;
      free_rows.push_back(i);
    }
  }
  if (free_rows.empty()) return s;

  Eigen::VectorXd s_fixed = s;
  for (Eigen::Index i : free_rows) s_fixed(i) = 0.0;
  const Eigen::VectorXd c = At * s_fixed;

  // B holds the rows of A with free certificate entries, as columns.
  const Eigen::Index f = static_cast<Eigen::Index>(free_rows.size());
  std::vector<Eigen::Triplet<double>> trips;
  for (Eigen::Index k = 0; k < f; ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(
             At, free_rows[static_cast<std::size_t>(k)]);
         it; ++it) {
      trips.emplace_back(it.row(), k, it.value());
    }
  }
  Eigen::SparseMatrix<double> B(n, f);
  B.setFromTriplets(trips.begin(), trips.end());
  const Eigen::SparseMatrix<double> Bt = B.transpose();
  Eigen::SparseMatrix<double> G = Bt * B;
  double diagscale = 1.0;
  for (Eigen::Index k = 0; k < f; ++k) {
    diagscale = std::max(diagscale, G.coeff(k, k));
  }
  Eigen::SparseMatrix<double> identity(f, f);
  identity.setIdentity();
  G += (1e-10 * diagscale) * identity;

  Eigen::VectorXd t = Eigen::VectorXd::Zero(f);
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> warm;
  warm.compute(G);
  if (warm.info() == Eigen::Success) {
    t = warm.solve(Eigen::VectorXd(-(Bt * c)));
    for (Eigen::Index k = 0; k < f; ++k) {
      t(k) = std::min(1.0, std::max(-1.0, t(k)));
    }
  }

  // minimize ||c + B t||^2 over the box by exact coordinate steps
  const Eigen::VectorXd ct = Bt * c;
  Eigen::VectorXd Gt = G * t;
  for (int sweep = 0; sweep < 500; ++sweep) {
    double moved = 0.0;
    for (Eigen::Index k = 0; k < f; ++k) {
      const double gkk = G.coeff(k, k);
      if (gkk <= 0.0) continue;
      const double next =
          std::min(1.0, std::max(-1.0, t(k) - (Gt(k) + ct(k)) / gkk));
      const double dk = next - t(k);
      if (dk != 0.0) {
        t(k) = next;
        for (Eigen::SparseMatrix<double>::InnerIterator it(G, k); it; ++it) {
          Gt(it.row()) += dk * it.value();
        }
        moved = std::max(moved, std::abs(dk));
      }
    }
    if (moved < 1e-14) break;
  }
  for (Eigen::Index k = 0; k < f; ++k) {
    s(free_rows[static_cast<std::size_t>(k)]) = t(k);
  }
  return s;
}

}  // namespace

SolverDidNotConverge::SolverDidNotConverge(const std::string& message,
                                           LadSolution best)
    : Error(ErrorCode::SolverDidNotConverge, message), best_(std::move(best)) {}

L1Solver::L1Solver(const Eigen::SparseMatrix<double>& A) : A_(A) {
  if (A_.rows() == 0 || A_.cols() == 0) {
    throw Error(ErrorCode::DimensionMismatch, "matrix must be non-empty");
  }
  if (A_.rows() < A_.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix must have at least as many rows as columns");
  }
  A_.makeCompressed();
  At_ = A_.transpose();

  // Column-rank probe: factorize the unweighted normal matrix once and
  // inspect the pivots, so a deficient matrix fails here instead of
  // producing garbage iterates later.
  const Eigen::SparseMatrix<double> normal = At_ * A_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> probe;
  probe.compute(normal);
  bool deficient = probe.info() != Eigen::Success;
  if (!deficient) {
    const Eigen::VectorXd d = probe.vectorD();
    const double dmax = d.maxCoeff();
    if (!(d.minCoeff() > 0.0) || !(dmax > 0.0) ||
        d.minCoeff() < 1e-12 * dmax) {
      deficient = true;
    }
  }
  if (deficient) {
    throw Error(ErrorCode::SingularSystem,
                "normal matrix factorization failed; matrix is rank deficient");
  }
}

LadSolution L1Solver::solve(const Eigen::VectorXd& b,
                            const LadSolverConfig& config) const {
  if (b.size() != A_.rows()) {
    throw Error(ErrorCode::DimensionMismatch,
                "right-hand side length does not match matrix rows");
  }
  if (config.max_iterations < 1 || config.rel_tolerance <= 0.0 ||
      config.abs_tolerance <= 0.0) {
    throw Error(ErrorCode::InvalidConfig,
                "solver budget and tolerances must be positive");
  }

  const Eigen::Index m = A_.rows();
  const Eigen::Index n = A_.cols();

  LadSolution best;
  best.x = Eigen::VectorXd::Zero(n);
  best.objective = l1_norm(b);  // objective at the starting point x = 0
  best.dual = Eigen::VectorXd::Zero(m);

  const double bscale = b.lpNorm<Eigen::Infinity>();
  if (bscale == 0.0) {
    // x = 0 fits exactly; the all-zero dual certifies it.
    best.converged = true;
    best.residual_history.push_back(0.0);
    return best;
  }
  best.residual_history.reserve(
      static_cast<std::size_t>(config.max_iterations));

  // Reweighting: x minimizes sum_i w_i (A x - b)_i^2 with w_i inversely
  // proportional to max(|r_i|, eps), which is one descent step on the
  // eps-smoothed absolute-value objective. The width eps starts at the data
  // scale and shrinks toward its floor two ways: it follows the n-th
  // smallest residual magnitude down (at a minimizer with n columns at
  // least n residuals vanish, so that quantile tracks the vanishing
  // cluster), and it drops tenfold whenever the iterate stalls at the
  // current width. Convergence requires both the step tolerance and a
  // fully shrunk eps, so an early stall cannot end the solve.
  const double eps_floor = 1e-8 * bscale;
  double eps = 0.1 * bscale;

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
  bool analyzed = false;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd r = -b;
  Eigen::VectorXd w(m), x_prev(n), absr(m);

  int iter = 0;
  bool converged = false;

  for (iter = 1; iter <= config.max_iterations; ++iter) {
    for (Eigen::Index i = 0; i < m; ++i) {
      w(i) = eps / std::max(std::abs(r(i)), eps);
    }
    const Eigen::SparseMatrix<double> weighted = At_ * w.asDiagonal() * A_;
    if (!analyzed) {
      ldlt.analyzePattern(weighted);
      analyzed = true;
    }
    ldlt.factorize(weighted);
    if (ldlt.info() != Eigen::Success) {
      throw Error(ErrorCode::SingularSystem,
                  "weighted normal matrix factorization failed");
    }
    x_prev = x;
    x = ldlt.solve(At_ * w.cwiseProduct(b));
    r.noalias() = A_ * x;
    r -= b;

    const double objective = l1_norm(r);
    if (objective < best.objective) {
      best.objective = objective;
      best.x = x;
    }
    best.residual_history.push_back(best.objective);

    const double step = (x - x_prev).lpNorm<Eigen::Infinity>();
    const double xscale = x.lpNorm<Eigen::Infinity>();
    if (step <= config.abs_tolerance + config.rel_tolerance * xscale &&
        eps <= eps_floor) {
      converged = true;
      break;
    }

    if (n < m) {
      absr = r.cwiseAbs();
      std::nth_element(absr.data(), absr.data() + n, absr.data() + m);
      eps = std::max(std::min(eps, std::max(0.9 * absr(n), 0.25 * eps)),
                     eps_floor);
    }
    if (step <= config.abs_tolerance + 1e-2 * xscale) {
      eps = std::max(eps * 0.1, eps_floor);
    }
  }

  best.iterations = std::min(iter, config.max_iterations);
  best.converged = converged;
  best.dual = certificate(A_, At_, Eigen::VectorXd(A_ * best.x - b), eps);
  if (!converged) {
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "no convergence after %d iterations (objective %.6g)",
                  config.max_iterations, best.objective);
    throw SolverDidNotConverge(buf, std::move(best));
  }
  return best;
}

LadSolution solve_l1(const Eigen::SparseMatrix<double>& A,
                     const Eigen::VectorXd& b, const LadSolverConfig& config) {
  return L1Solver(A).solve(b, config);
}

LadSolution solve_l1(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                     const LadSolverConfig& config) {
  return L1Solver(A.sparseView()).solve(b, config);
}

// ---------------------------------------------------------------------------
// Simplex reference
// ---------------------------------------------------------------------------

LadSolution lp_reference(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (m == 0 || n == 0) {
    throw Error(ErrorCode::DimensionMismatch, "matrix must be non-empty");
  }
  if (b.size() != m) {
    throw Error(ErrorCode::DimensionMismatch,
                "right-hand side length does not match matrix rows");
  }

  // Standard form: split x = p - s with p, s >= 0 and write the residual as
  // u - w with u, w >= 0, giving
  //   minimize 1^T u + 1^T w   subject to  A p - A s - u + w = b.
  // Negating rows with b_i < 0 makes one of the u_i / w_i columns a unit
  // column with +1, so those columns form a feasible starting basis and no
  // phase-1 is needed.
  const Eigen::Index cols = 2 * n + 2 * m;
  Eigen::MatrixXd tab(m, cols);
  Eigen::VectorXd rhs = b;
  tab.block(0, 0, m, n) = A;
  tab.block(0, n, m, n) = -A;
  tab.block(0, 2 * n, m, m) = -Eigen::MatrixXd::Identity(m, m);
  tab.block(0, 2 * n + m, m, m) = Eigen::MatrixXd::Identity(m, m);

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(cols);
  cost.segment(2 * n, 2 * m).setOnes();

  std::vector<Eigen::Index> basis(static_cast<std::size_t>(m));
  for (Eigen::Index i = 0; i < m; ++i) {
    if (rhs(i) < 0.0) {
      tab.row(i) = -tab.row(i);
      rhs(i) = -rhs(i);
      basis[static_cast<std::size_t>(i)] = 2 * n + i;  // u_i enters with +1
    } else {
      basis[static_cast<std::size_t>(i)] = 2 * n + m + i;  // w_i
    }
  }

  // Reduce basic columns out of the cost row. Every starting basic column is
  // already a unit column, so the reduction is a plain subtraction.
  Eigen::VectorXd reduced = cost;
  for (Eigen::Index i = 0; i < m; ++i) {
    const Eigen::Index j = basis[static_cast<std::size_t>(i)];
    if (cost(j) != 0.0) {
      reduced -= cost(j) * tab.row(i).transpose();
    }
  }

  constexpr double kPivotEps = 1e-11;
  constexpr double kCostEps = 1e-9;
  const long max_pivots = 50L * static_cast<long>(cols);

  for (long pivot_count = 0;; ++pivot_count) {
    if (pivot_count > max_pivots) {
      throw Error(ErrorCode::SolverDidNotConverge,
                  "simplex pivot budget exhausted");
    }

    // Bland's rule: lowest-index column with a negative reduced cost.
    Eigen::Index entering = -1;
    for (Eigen::Index j = 0; j < cols; ++j) {
      if (reduced(j) < -kCostEps) {
        entering = j;
        break;
      }
    }
    if (entering < 0) {
      break;  // optimal
    }

    // Ratio test, ties broken by lowest basis index (Bland again).
    Eigen::Index leaving = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double a = tab(i, entering);
      if (a > kPivotEps) {
        const double ratio = rhs(i) / a;
        if (ratio < best_ratio - kPivotEps ||
            (ratio < best_ratio + kPivotEps && leaving >= 0 &&
             basis[static_cast<std::size_t>(i)] <
                 basis[static_cast<std::size_t>(leaving)])) {
          best_ratio = ratio;
          leaving = i;
        }
      }
    }
    if (leaving < 0) {
      // The objective is bounded below by zero, so an unbounded ray cannot
      // occur for this program unless the tableau degraded numerically.
      throw Error(ErrorCode::SolverDidNotConverge,
                  "simplex detected an unbounded direction");
    }

    const double pivot = tab(leaving, entering);
    tab.row(leaving) /= pivot;
    rhs(leaving) /= pivot;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (i != leaving) {
        const double factor = tab(i, entering);
        if (factor != 0.0) {
          tab.row(i) -= factor * tab.row(leaving);
          rhs(i) -= factor * rhs(leaving);
        }
      }
    }
    const double rfactor = reduced(entering);
    if (rfactor != 0.0) {
      reduced -= rfactor * tab.row(leaving).transpose();
    }
    basis[static_cast<std::size_t>(leaving)] = entering;
  }

  Eigen::VectorXd full = Eigen::VectorXd::Zero(cols);
  for (Eigen::Index i = 0; i < m; ++i) {
    full(basis[static_cast<std::size_t>(i)]) = rhs(i);
  }

  LadSolution sol;
  sol.x = full.segment(0, n) - full.segment(n, n);
  sol.objective = (A * sol.x - b).lpNorm<1>();
  sol.iterations = 0;
  sol.converged = true;
  return sol;
}

}  // namespace robuststl::lad
