#include "lrsplit/operator.hpp"

#include <cmath>

#include "lrsplit/errors.hpp"
#include "lrsplit/rng.hpp"

namespace lrsplit {

namespace {

Vector reciprocal(std::span<const double> d) {
  Vector r(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) r[i] = 1.0 / d[i];
  return r;
}

void require_positive(std::span<const double> v, const char* what) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) {
      throw InvalidArgument(std::string(what) + ": entry " + std::to_string(i) +
                            " is not positive");
    }
  }
}

}  // namespace

LowRankUpdatedOperator::LowRankUpdatedOperator(CsrMatrix a, TallMatrix u, double gamma,
                                               std::optional<Vector> scaling)
    : a_(std::move(a)), u_(std::move(u)), gamma_(gamma), scaling_(std::move(scaling)) {
  const std::size_t n = a_.rows();
  if (a_.cols() != n) throw DimensionError("operator: A must be square");
  if (rows(u_) != n) throw DimensionError("operator: U must have as many rows as A");
  if (cols(u_) >= n) throw InvalidArgument("operator: U must have fewer columns than rows (k < n)");
  if (!(gamma_ > 0.0) || !std::isfinite(gamma_)) {
    throw InvalidArgument("operator: gamma must be positive");
  }
  if (scaling_) {
    if (scaling_->size() != n) throw DimensionError("operator: scaling length mismatch");
    require_positive(*scaling_, "operator scaling");
    const Vector inv = reciprocal(*scaling_);
    eff_a_ = a_.diag_scaled(inv, inv);
    eff_u_ = row_scaled(u_, inv);
  } else {
    eff_a_ = a_;
    eff_u_ = u_;
  }
  a_symmetric_ = eff_a_.is_symmetric(1e-12);
}

Vector LowRankUpdatedOperator::apply(std::span<const double> x) const {
  if (x.size() != size()) throw DimensionError("operator apply: dimension mismatch");
  const Vector t = tall_apply(eff_u_, x, Trans::Yes);
  Vector y = spmv(eff_a_, x);
  const Vector ut = tall_apply(eff_u_, t);
  axpy(gamma_, ut, y);
  return y;
}

Vector apply(const Operator& op, std::span<const double> x) { return op.apply(x); }

Vector diag_gamma(const Operator& op) {
  Vector d = op.effective_a().diagonal_values();
  const Vector r = row_norms_squared(op.effective_u());
  axpy(op.gamma(), r, d);
  return d;
}

Operator with_diagonal_scaling(const Operator& op) {
  const Vector d = diag_gamma(op);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!(d[i] > 0.0)) {
      throw InvalidArgument("with_diagonal_scaling: diagonal entry " + std::to_string(i) +
                            " is not positive");
    }
  }
  Vector s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    s[i] = std::sqrt(d[i]);
    if (op.scaling()) s[i] *= (*op.scaling())[i];
  }
  return Operator(op.a(), op.u(), op.gamma(), std::move(s));
}

std::pair<Operator, NormalizationRecord> normalize(const Operator& op, double tol) {
  NormalizationRecord rec;
  rec.norm_a = two_norm_estimate(op.effective_a(), tol).value;
  rec.norm_u = two_norm_estimate(op.effective_u(), tol).value;
  if (!(rec.norm_a > 0.0)) throw InvalidArgument("normalize: A is zero");
  if (!(rec.norm_u > 0.0)) throw InvalidArgument("normalize: U is zero");
  rec.gamma_tilde = op.gamma() * rec.norm_u * rec.norm_u / rec.norm_a;
  Operator out(op.effective_a().scaled(1.0 / rec.norm_a), scaled(op.effective_u(), 1.0 / rec.norm_u),
               rec.gamma_tilde);
  return {std::move(out), rec};
}

DenseMatrix assemble_dense(const Operator& op, std::size_t cap) {
  const std::size_t n = op.size();
  if (n > cap) {
    throw SizeCapExceeded("assemble_dense: n = " + std::to_string(n) + " exceeds the cap of " +
                          std::to_string(cap));
  }
  DenseMatrix m = op.effective_a().to_dense();
  const DenseMatrix u = to_dense(op.effective_u());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t c = 0; c < u.cols(); ++c) s += u(i, c) * u(j, c);
      m(i, j) += op.gamma() * s;
    }
  }
  return m;
}

bool probe_positive_definite(const Operator& op, std::size_t trials, std::uint64_t seed) {
  Rng rng(seed);
  Vector x(op.size());
  for (std::size_t t = 0; t < trials; ++t) {
    for (double& v : x) v = rng.normal();
    if (!(dot(x, op.apply(x)) > 0.0)) return false;
  }
  return true;
}

Operator from_augmented_lagrangian(const CsrMatrix& a, const CsrMatrix& b,
                                   std::span<const double> w_diag, double gamma) {
  if (b.cols() != a.rows()) throw DimensionError("from_augmented_lagrangian: B must be k-by-n");
  if (w_diag.size() != b.rows()) throw DimensionError("from_augmented_lagrangian: W length mismatch");
  require_positive(w_diag, "from_augmented_lagrangian: weight");
  Vector s(w_diag.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = 1.0 / std::sqrt(w_diag[i]);
  return Operator(a, col_scaled(TallMatrix(b.transposed()), s), gamma);
}

Operator from_kkt_schur(const CsrMatrix& h, const CsrMatrix& c, std::span<const double> z,
                        std::span<const double> lambda) {
  if (c.cols() != h.rows()) throw DimensionError("from_kkt_schur: C must be k-by-n");
  if (z.size() != c.rows() || lambda.size() != c.rows()) {
    throw DimensionError("from_kkt_schur: z and lambda must have length k");
  }
  require_positive(z, "from_kkt_schur: z");
  require_positive(lambda, "from_kkt_schur: lambda");
  Vector s(z.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sqrt(lambda[i] / z[i]);
  return Operator(h, col_scaled(TallMatrix(c.transposed()), s), 1.0);
}

NormalEquations from_normal_equations(const CsrMatrix& b1, const DenseMatrix& b2) {
  if (b1.cols() != b2.cols()) throw DimensionError("from_normal_equations: column count mismatch");
  const CsrMatrix b1t = b1.transposed();
  Operator op(multiply(b1t, b1), TallMatrix(b2.transposed()), 1.0);
  const std::size_t m1 = b1.rows();
  const std::size_t k = b2.rows();
  auto rhs = [b1t, b2, m1, k](std::span<const double> c) {
    if (c.size() != m1 + k) throw DimensionError("normal equations rhs: length mismatch");
    Vector out = spmv(b1t, c.first(m1));
    const Vector t = matvec(b2, c.subspan(m1), Trans::Yes);
    axpy(1.0, t, out);
    return out;
  };
  return {std::move(op), std::move(rhs)};
}

}  // namespace lrsplit
