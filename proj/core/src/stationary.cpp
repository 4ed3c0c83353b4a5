#include <cmath>
#include <variant>

#include "lrsplit/errors.hpp"
#include "lrsplit/krylov.hpp"
#include "lrsplit/ordering.hpp"
#include "solver_common.hpp"

namespace lrsplit {

SolveResult stationary_alternating(const Operator& op, std::span<const double> b, double alpha,
                                   const SolveOptions& opts) {
  const std::size_t n = op.size();
  detail::check_options(opts, n);
  if (b.size() != n) throw DimensionError("stationary: rhs length mismatch");
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("stationary: alpha must be positive");
  const auto t0 = std::chrono::steady_clock::now();

  const CsrMatrix& a = op.effective_a();
  const TallMatrix& u = op.effective_u();
  const CsrMatrix shifted = a.shifted(alpha);
  std::variant<SparseCholesky, SparseLu> f1 =
      op.a_symmetric() ? std::variant<SparseCholesky, SparseLu>(SparseCholesky(shifted, amd_ordering(shifted)))
                       : std::variant<SparseCholesky, SparseLu>(SparseLu(shifted, amd_ordering(shifted)));
  const SmwSolver f2(u, alpha, op.gamma());
  const double setup = detail::seconds_since(t0);

  SolveResult out;
  out.x = opts.x0 ? *opts.x0 : Vector(n, 0.0);
  SolveReport& rep = out.report;
  rep.setup_seconds = setup;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    out.x.assign(n, 0.0);
    rep.converged = true;
    rep.residual_history.push_back(0.0);
    rep.solve_seconds = detail::seconds_since(t0) - setup;
    return out;
  }

  auto relres = [&](const Vector& x) {
    const double r = norm2(subtract(b, op.apply(x))) / bnorm;
    if (!std::isfinite(r)) throw NumericalBreakdown("stationary: non-finite residual");
    return r;
  };

  double rel = relres(out.x);
  rep.residual_history.push_back(rel);
  rep.converged = rel < opts.tol;
  while (!rep.converged && rep.iterations < opts.maxit) {
    // First half step: (A + alpha I) x' = (alpha I - gamma U U^T) x + b.
    Vector rhs = out.x;
    scale(alpha, rhs);
    const Vector uut = tall_apply(u, tall_apply(u, out.x, Trans::Yes));
    axpy(-op.gamma(), uut, rhs);
    axpy(1.0, b, rhs);
    const Vector half = std::visit([&](const auto& f) { return f.solve(rhs); }, f1);

    // Second half step: (alpha I + gamma U U^T) x'' = (alpha I - A) x' + b.
    Vector rhs2 = half;
    scale(alpha, rhs2);
    const Vector ah = spmv(a, half);
    axpy(-1.0, ah, rhs2);
    axpy(1.0, b, rhs2);
    const Vector next = f2.apply(rhs2);

    if (opts.beta == 1.0) {
      out.x = next;
    } else {
      for (std::size_t i = 0; i < n; ++i) out.x[i] = (1.0 - opts.beta) * out.x[i] + opts.beta * next[i];
    }
    ++rep.iterations;
    rel = relres(out.x);
    rep.residual_history.push_back(rel);
    rep.converged = rel < opts.tol;
  }
  rep.solve_seconds = detail::seconds_since(t0) - setup;
  return out;
}

}  // namespace lrsplit
