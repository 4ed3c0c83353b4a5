#include <chrono>
#include <cmath>

#include "lrsplit/errors.hpp"
#include "lrsplit/krylov.hpp"
#include "solver_common.hpp"

namespace lrsplit {

using detail::check_options;
using detail::seconds_since;

SolveResult gmres_right(std::size_t n, const LinearMap& a, std::span<const double> b,
                        const LinearMap& m, const SolveOptions& opts) {
  check_options(opts, n);
  if (b.size() != n) throw DimensionError("gmres: rhs length mismatch");
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

  const std::size_t mdim = std::min(opts.restart, std::max<std::size_t>(n, 1));
  std::vector<Vector> v(mdim + 1, Vector(n));
  // Column-major (mdim+1) x mdim Hessenberg matrix.
  std::vector<double> h((mdim + 1) * mdim);
  auto hij = [&](std::size_t i, std::size_t j) -> double& { return h[j * (mdim + 1) + i]; };
  Vector cs(mdim), sn(mdim), g(mdim + 1);

  while (true) {
    Vector r = subtract(b, a(out.x));
    const double beta = norm2(r);
    const double rel = beta / bnorm;
    if (!std::isfinite(rel)) throw NumericalBreakdown("gmres: non-finite residual");
    if (rep.residual_history.empty()) {
      rep.residual_history.push_back(rel);
    } else {
      rep.residual_history.back() = rel;
    }
    if (rel < opts.tol) {
      rep.converged = true;
      break;
    }
    if (rep.iterations >= opts.maxit) break;

    for (std::size_t i = 0; i < n; ++i) v[0][i] = r[i] / beta;
    std::fill(g.begin(), g.end(), 0.0);
    g[0] = beta;
    std::size_t j = 0;
    while (j < mdim && rep.iterations < opts.maxit) {
      Vector w = a(m(v[j]));
      for (std::size_t i = 0; i <= j; ++i) {
        hij(i, j) = dot(w, v[i]);
        axpy(-hij(i, j), v[i], w);
      }
      const double hnext = norm2(w);
      hij(j + 1, j) = hnext;
      for (std::size_t i = 0; i < j; ++i) {
        const double t = cs[i] * hij(i, j) + sn[i] * hij(i + 1, j);
        hij(i + 1, j) = -sn[i] * hij(i, j) + cs[i] * hij(i + 1, j);
        hij(i, j) = t;
      }
      const double denom = std::hypot(hij(j, j), hnext);
      if (denom == 0.0) {
        cs[j] = 1.0;
        sn[j] = 0.0;
      } else {
        cs[j] = hij(j, j) / denom;
        sn[j] = hnext / denom;
      }
      hij(j, j) = cs[j] * hij(j, j) + sn[j] * hnext;
      hij(j + 1, j) = 0.0;
      g[j + 1] = -sn[j] * g[j];
      g[j] = cs[j] * g[j];

      ++rep.iterations;
      const double est = std::abs(g[j + 1]) / bnorm;
      if (!std::isfinite(est) || !std::isfinite(hnext)) {
        throw NumericalBreakdown("gmres: non-finite value in Arnoldi process");
      }
      rep.residual_history.push_back(est);
      ++j;
      if (hnext == 0.0 || est < opts.tol) break;
      for (std::size_t i = 0; i < n; ++i) v[j][i] = w[i] / hnext;
    }

    // Solve the j-by-j triangular system and update x += M (V y).
    Vector y(j);
    for (std::size_t i = j; i-- > 0;) {
      double s = g[i];
      for (std::size_t c = i + 1; c < j; ++c) s -= hij(i, c) * y[c];
      if (hij(i, i) == 0.0) throw NumericalBreakdown("gmres: singular Hessenberg matrix");
      y[i] = s / hij(i, i);
    }
    Vector vy(n, 0.0);
    for (std::size_t c = 0; c < j; ++c) axpy(y[c], v[c], vy);
    const Vector dx = m(vy);
    if (!all_finite(dx)) throw NumericalBreakdown("gmres: non-finite update");
    axpy(1.0, dx, out.x);
  }
  rep.solve_seconds = seconds_since(t0);
  return out;
}

SolveResult gmres_right(const Operator& op, std::span<const double> b, const Preconditioner& p,
                        const SolveOptions& opts) {
  if (p.size() != op.size()) throw DimensionError("gmres: preconditioner size mismatch");
  return gmres_right(
      op.size(), [&op](std::span<const double> x) { return op.apply(x); }, b,
      [&p](std::span<const double> x) { return p.apply(x); }, opts);
}

}  // namespace lrsplit
