#include <cmath>

#include "lrsplit/errors.hpp"
#include "lrsplit/krylov.hpp"
#include "solver_common.hpp"

namespace lrsplit {

using detail::check_options;
using detail::seconds_since;

SolveResult pcg(std::size_t n, const LinearMap& a, std::span<const double> b, const LinearMap& m,
                const SolveOptions& opts) {
  check_options(opts, n);
  if (b.size() != n) throw DimensionError("pcg: rhs length mismatch");
  const auto t0 = std::chrono::steady_clock::now();

  SolveResult out;
  out.x = opts.x0 ? *opts.x0 : Vector(n, 0.0);
  SolveReport& rep = out.report;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    out.x.assign(n, 0.0);
    rep.converged = true;
    rep.residual_history.push_back(0.0);
    rep.solve_seconds = seconds_since(t0);
    return out;
  }

  constexpr std::size_t kReplaceEvery = 50;
  Vector r = subtract(b, a(out.x));
  double rel = norm2(r) / bnorm;
  rep.residual_history.push_back(rel);
  if (rel < opts.tol) {
    rep.converged = true;
    rep.solve_seconds = seconds_since(t0);
    return out;
  }
  Vector z = m(r);
  Vector p = z;
  double rz = dot(r, z);
  if (!(rz > 0.0)) throw NumericalBreakdown("pcg: preconditioner not SPD");

  while (rep.iterations < opts.maxit) {
    const Vector q = a(p);
    const double pq = dot(p, q);
    if (!std::isfinite(pq)) throw NumericalBreakdown("pcg: non-finite value");
    if (!(pq > 0.0)) throw NumericalBreakdown("pcg: operator not SPD");
    const double step = rz / pq;
    axpy(step, p, out.x);
    axpy(-step, q, r);
    ++rep.iterations;
    if (rep.iterations % kReplaceEvery == 0) r = subtract(b, a(out.x));
    rel = norm2(r) / bnorm;
    if (!std::isfinite(rel)) throw NumericalBreakdown("pcg: non-finite residual");
    if (rel < opts.tol) {
      r = subtract(b, a(out.x));
      rel = norm2(r) / bnorm;
      rep.residual_history.push_back(rel);
      if (rel < opts.tol) {
        rep.converged = true;
        break;
      }
    } else {
      rep.residual_history.push_back(rel);
    }
    z = m(r);
    const double rz_new = dot(r, z);
    if (!(rz_new > 0.0)) throw NumericalBreakdown("pcg: preconditioner not SPD");
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  rep.solve_seconds = seconds_since(t0);
  return out;
}

SolveResult pcg(const Operator& op, std::span<const double> b, const Preconditioner& p,
                const SolveOptions& opts) {
  if (p.size() != op.size()) throw DimensionError("pcg: preconditioner size mismatch");
  if (!op.a_symmetric()) throw InvalidArgument("pcg: A must be symmetric");
  return pcg(
      op.size(), [&op](std::span<const double> x) { return op.apply(x); }, b,
      [&p](std::span<const double> x) { return p.apply(x); }, opts);
}

}  // namespace lrsplit
