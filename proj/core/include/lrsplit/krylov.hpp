#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "lrsplit/norm.hpp"
#include "lrsplit/operator.hpp"
#include "lrsplit/preconditioner.hpp"

namespace lrsplit {

struct SolveOptions {
  double tol = 1e-6;
  std::size_t maxit = 2000;
  std::size_t restart = 20;
  std::optional<Vector> x0;
  /// Damping of the stationary iteration, in (0, 1].
  double beta = 1.0;
};

struct SolveReport {
  bool converged = false;
  /// Arnoldi steps for GMRES (summed over restarts), iterations otherwise.
  std::size_t iterations = 0;
  /// Relative residuals: entry 0 is the initial residual, then one per
  /// iteration. Inside a GMRES cycle the entries are the Givens estimates;
  /// the entry closing each cycle is the recomputed true residual.
  Vector residual_history;
  double setup_seconds = 0.0;
  double solve_seconds = 0.0;

  double final_relres() const { return residual_history.empty() ? 0.0 : residual_history.back(); }
};

struct SolveResult {
  Vector x;
  SolveReport report;
};

/// Restarted right-preconditioned GMRES (modified Gram-Schmidt, Givens
/// rotations). Convergence is declared on the true relative residual.
/// NaN/Inf throws NumericalBreakdown.
SolveResult gmres_right(const Operator& op, std::span<const double> b, const Preconditioner& p,
                        const SolveOptions& opts = {});
SolveResult gmres_right(std::size_t n, const LinearMap& a, std::span<const double> b,
                        const LinearMap& m, const SolveOptions& opts = {});

/// Preconditioned conjugate gradients. Throws NumericalBreakdown if
/// p^T A p <= 0 or r^T P^{-1} r <= 0.
SolveResult pcg(const Operator& op, std::span<const double> b, const Preconditioner& p,
                const SolveOptions& opts = {});
SolveResult pcg(std::size_t n, const LinearMap& a, std::span<const double> b, const LinearMap& m,
                const SolveOptions& opts = {});

/// x <- (1 - beta) x + beta (T_alpha x + d) from the two half steps
///   (A + alpha I) x' = (alpha I - gamma U U^T) x + b,
///   (alpha I + gamma U U^T) x'' = (alpha I - A) x' + b,
/// with exact inner solves (sparse Cholesky, or no-pivot LU for
/// nonsymmetric A, and the SMW solver).
SolveResult stationary_alternating(const Operator& op, std::span<const double> b, double alpha,
                                   const SolveOptions& opts = {});

}  // namespace lrsplit
