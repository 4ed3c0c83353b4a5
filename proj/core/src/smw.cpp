#include <cmath>

#include "lrsplit/errors.hpp"
#include "lrsplit/ordering.hpp"
#include "lrsplit/preconditioner.hpp"

namespace lrsplit {

SmwSolver::SmwSolver(TallMatrix u, double alpha, double gamma, std::size_t dense_threshold)
    : u_(std::move(u)), alpha_(alpha), gamma_(gamma) {
  if (!(alpha_ > 0.0) || !std::isfinite(alpha_)) throw InvalidArgument("smw: alpha must be positive");
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) throw InvalidArgument("smw: gamma must be positive");
  const std::size_t k = cols(u_);
  if (k == 0) return;
  auto g = gram(u_);
  if (k <= dense_threshold) {
    DenseMatrix m = std::holds_alternative<DenseMatrix>(g) ? std::get<DenseMatrix>(std::move(g))
                                                           : std::get<CsrMatrix>(g).to_dense();
    scale(gamma_, m.values());
    for (std::size_t i = 0; i < k; ++i) m(i, i) += alpha_;
    inner_.emplace<DenseCholesky>(m);
  } else {
    CsrMatrix m = std::holds_alternative<CsrMatrix>(g) ? std::get<CsrMatrix>(std::move(g))
                                                       : CsrMatrix::from_dense(std::get<DenseMatrix>(g));
    m = m.scaled(gamma_).shifted(alpha_);
    inner_.emplace<SparseCholesky>(m, amd_ordering(m));
  }
}

Vector SmwSolver::inner_solve(std::span<const double> t) const {
  if (const auto* d = std::get_if<DenseCholesky>(&inner_)) return d->solve(t);
  if (const auto* s = std::get_if<SparseCholesky>(&inner_)) return s->solve(t);
  return {};
}

Vector SmwSolver::apply(std::span<const double> r) const {
  if (r.size() != size()) throw DimensionError("smw_apply: dimension mismatch");
  Vector z(r.begin(), r.end());
  if (rank() > 0) {
    const Vector s = inner_solve(tall_apply(u_, r, Trans::Yes));
    const Vector us = tall_apply(u_, s);
    axpy(-gamma_, us, z);
  }
  scale(1.0 / alpha_, z);
  return z;
}

SmwSolver build_smw(const TallMatrix& u, double alpha, double gamma) { return SmwSolver(u, alpha, gamma); }

Vector smw_apply(const SmwSolver& s, std::span<const double> r) { return s.apply(r); }

}  // namespace lrsplit
