#include <algorithm>
#include <cmath>
#include <limits>
#include <variant>

#include "lrsplit/errors.hpp"
#include "lrsplit/ordering.hpp"
#include "lrsplit/spectra.hpp"

namespace lrsplit {

double Spectrum::min_re() const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& z : eigenvalues) v = std::min(v, z.real());
  return v;
}

double Spectrum::max_re() const {
  double v = -std::numeric_limits<double>::infinity();
  for (const auto& z : eigenvalues) v = std::max(v, z.real());
  return v;
}

double Spectrum::max_abs_im() const {
  double v = 0.0;
  for (const auto& z : eigenvalues) v = std::max(v, std::abs(z.imag()));
  return v;
}

double Spectrum::max_distance_from(std::complex<double> center) const {
  double v = 0.0;
  for (const auto& z : eigenvalues) v = std::max(v, std::abs(z - center));
  return v;
}

Spectrum Spectrum::sorted() const {
  Spectrum s = *this;
  std::sort(s.eigenvalues.begin(), s.eigenvalues.end(), [](const auto& a, const auto& b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  return s;
}

namespace {

void check_cap(std::size_t n, std::size_t cap, const char* who) {
  if (n > cap) {
    throw SizeCapExceeded(std::string(who) + ": n = " + std::to_string(n) + " exceeds the cap of " +
                          std::to_string(cap));
  }
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument(std::string(what) + " must be positive");
}

template <class Map>
DenseMatrix assemble_columns(std::size_t n, Map map) {
  DenseMatrix out(n, n);
  Vector e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    const Vector c = map(e);
    e[j] = 0.0;
    std::copy(c.begin(), c.end(), out.column(j).begin());
  }
  return out;
}

}  // namespace

DenseMatrix preconditioned_matrix(const Operator& op, const Preconditioner& p, std::size_t cap) {
  check_cap(op.size(), cap, "preconditioned_matrix");
  if (p.size() != op.size()) throw DimensionError("preconditioned_matrix: size mismatch");
  return assemble_columns(op.size(), [&](const Vector& e) { return p.apply(op.apply(e)); });
}

Spectrum preconditioned_spectrum(const Operator& op, const Preconditioner& p,
                                 ScalarConvention convention, std::size_t cap) {
  const std::size_t n = op.size();
  check_cap(n, cap, "preconditioned_spectrum");
  if (p.size() != n) throw DimensionError("preconditioned_spectrum: size mismatch");
  Spectrum s;
  if (p.kind() == PrecondKind::Symmetrized && op.a_symmetric()) {
    DenseMatrix pinv = assemble_columns(n, [&](const Vector& e) { return p.apply(e); });
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j + 1; i < n; ++i) {
        const double v = 0.5 * (pinv(i, j) + pinv(j, i));
        pinv(i, j) = v;
        pinv(j, i) = v;
      }
    const DenseCholesky chol(pinv);
    const DenseMatrix& r = chol.factor();
    const DenseMatrix ar = assemble_columns(n, [&](const Vector& e) {
      return op.apply(matvec(r, e));
    });
    DenseMatrix sym = matmul_tn(r, ar);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = j + 1; i < n; ++i) {
        const double v = 0.5 * (sym(i, j) + sym(j, i));
        sym(i, j) = v;
        sym(j, i) = v;
      }
    for (double v : eig_symmetric(sym)) s.eigenvalues.emplace_back(v, 0.0);
  } else {
    s = eig_general(preconditioned_matrix(op, p, cap), cap);
  }
  if (convention == ScalarConvention::Retained) {
    const double c = p.scalar_factor();
    for (auto& z : s.eigenvalues) z *= c;
  }
  return s;
}

DenseMatrix iteration_matrix(const Operator& op, double alpha, std::size_t cap) {
  require_positive(alpha, "alpha");
  const std::size_t n = op.size();
  check_cap(n, cap, "iteration_matrix");
  const CsrMatrix& a = op.effective_a();
  const TallMatrix& u = op.effective_u();
  const CsrMatrix shifted = a.shifted(alpha);
  std::variant<SparseCholesky, SparseLu> f1 =
      op.a_symmetric() ? std::variant<SparseCholesky, SparseLu>(SparseCholesky(shifted, amd_ordering(shifted)))
                       : std::variant<SparseCholesky, SparseLu>(SparseLu(shifted, amd_ordering(shifted)));
  const SmwSolver f2(u, alpha, op.gamma());
  return assemble_columns(n, [&](const Vector& e) {
    Vector v = e;
    scale(alpha, v);
    axpy(-op.gamma(), tall_apply(u, tall_apply(u, e, Trans::Yes)), v);
    Vector h = std::visit([&](const auto& f) { return f.solve(v); }, f1);
    Vector w = h;
    scale(alpha, w);
    axpy(-1.0, spmv(a, h), w);
    return f2.apply(w);
  });
}

double iteration_matrix_radius(const Operator& op, double alpha, std::size_t cap) {
  const Spectrum s = eig_general(iteration_matrix(op, alpha, cap), cap);
  double r = 0.0;
  for (const auto& z : s.eigenvalues) r = std::max(r, std::abs(z));
  return r;
}

double lambda_min_symmetric_part(const Operator& op, std::size_t cap) {
  const std::size_t n = op.size();
  check_cap(n, cap, "lambda_min_symmetric_part");
  const CsrMatrix sym = add(op.effective_a(), op.effective_a().transposed());
  const Vector eig = eig_symmetric(sym.to_dense(), cap);
  return eig.empty() ? 0.0 : eig.front();
}

double bound_mu(double alpha, double gamma, double lambda_min_sym) {
  require_positive(alpha, "alpha");
  require_positive(gamma, "gamma");
  require_positive(lambda_min_sym, "lambda_min(A + A^T)");
  return alpha * lambda_min_sym / ((1.0 + alpha) * (alpha + gamma));
}

double bound_re_lower(double alpha, double gamma, double lambda_min_a) {
  require_positive(alpha, "alpha");
  require_positive(gamma, "gamma");
  require_positive(lambda_min_a, "lambda_min(A)");
  const double a1 = alpha + 1.0;
  const double ag = alpha + gamma;
  return 2.0 * alpha * a1 * ag * lambda_min_a / (a1 * a1 * ag * ag + gamma * gamma);
}

std::pair<double, double> bound_symm_interval(double alpha, double gamma, double lambda_min_a) {
  require_positive(alpha, "alpha");
  require_positive(gamma, "gamma");
  require_positive(lambda_min_a, "lambda_min(A)");
  return {2.0 * alpha * lambda_min_a / ((1.0 + alpha) * (alpha + gamma)),
          (2.0 + 2.0 * gamma) / (lambda_min_a + alpha)};
}

double eig_kernel_u(double eta, double alpha) {
  require_positive(alpha, "alpha");
  return 2.0 * eta / (eta + alpha);
}

double eig_kernel_at(double utx_norm_sq, double alpha, double gamma) {
  require_positive(utx_norm_sq, "||U^T x||^2");
  require_positive(alpha, "alpha");
  require_positive(gamma, "gamma");
  return 2.0 / (1.0 + alpha / (gamma * utx_norm_sq));
}

std::complex<double> rayleigh_lambda(const Operator& op, double alpha, std::span<const double> x) {
  require_positive(alpha, "alpha");
  if (x.size() != op.size()) throw DimensionError("rayleigh_lambda: dimension mismatch");
  if (std::abs(norm2(x) - 1.0) > 1e-12) throw InvalidArgument("rayleigh_lambda: x must have unit norm");
  const double g = op.gamma();
  const Vector ax = spmv(op.effective_a(), x);
  const double xax = dot(x, ax);
  const Vector utx = tall_apply(op.effective_u(), x, Trans::Yes);
  const double utx2 = dot(utx, utx);
  const Vector uutx = tall_apply(op.effective_u(), utx);
  const double xauutx = dot(x, spmv(op.effective_a(), uutx));
  const double num = 2.0 * alpha * (xax + g * utx2);
  const double den = alpha * xax + g * xauutx + alpha * alpha + alpha * g * utx2;
  return {num / den, 0.0};
}

double RhoBound::operator()(double alpha) const {
  require_positive(alpha, "alpha");
  double r = 0.0;
  for (double l : eigenvalues) r = std::max(r, std::abs(alpha - l) / (alpha + l));
  return r;
}

RhoBound rho_upper_and_alpha_star(std::span<const double> eigs_a) {
  if (eigs_a.empty()) throw InvalidArgument("rho bound: no eigenvalues");
  RhoBound b;
  b.eigenvalues.assign(eigs_a.begin(), eigs_a.end());
  for (double l : b.eigenvalues) require_positive(l, "eigenvalue of A");
  const auto [lo, hi] = std::minmax_element(b.eigenvalues.begin(), b.eigenvalues.end());
  b.alpha_star = std::sqrt(*lo * *hi);
  return b;
}

double alpha_heuristic(double gamma) {
  require_positive(gamma, "gamma");
  return std::sqrt(gamma);
}

BoundsReport compute_bounds_report(const Operator& op, double alpha, bool with_spectrum) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  BoundsReport r;
  r.alpha = alpha;
  r.gamma = op.gamma();
  r.alpha_heuristic = alpha_heuristic(op.gamma());
  r.lambda_min_sym = lambda_min_symmetric_part(op);
  r.mu = r.lambda_min_sym > 0.0 ? bound_mu(alpha, op.gamma(), r.lambda_min_sym) : nan;
  r.lambda_min_a = r.lambda_max_a = r.lower_bound_re = r.rho_upper = r.alpha_star = nan;
  r.symm_interval = {nan, nan};
  if (op.a_symmetric()) {
    const Vector eig = eig_symmetric(op.effective_a().to_dense());
    r.lambda_min_a = eig.front();
    r.lambda_max_a = eig.back();
    if (r.lambda_min_a > 0.0) {
      r.lower_bound_re = bound_re_lower(alpha, op.gamma(), r.lambda_min_a);
      r.symm_interval = bound_symm_interval(alpha, op.gamma(), r.lambda_min_a);
      const RhoBound rho = rho_upper_and_alpha_star(eig);
      r.rho_upper = rho(alpha);
      r.alpha_star = rho.alpha_star;
    }
  }
  r.min_re = r.max_re = r.max_abs_im = nan;
  if (with_spectrum) {
    const PreconditionerPtr p = build_product(op, alpha, FactorMode::Exact);
    const Spectrum s = preconditioned_spectrum(op, *p, ScalarConvention::Retained);
    r.min_re = s.min_re();
    r.max_re = s.max_re();
    r.max_abs_im = s.max_abs_im();
  }
  return r;
}

}  // namespace lrsplit
