#include <algorithm>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "lrsplit/errors.hpp"
#include "lrsplit/spectra.hpp"
#include "support.hpp"

using namespace lrsplit;
using namespace testing;

namespace {

DenseMatrix from_rows(std::size_t n, std::initializer_list<double> rows) {
  DenseMatrix m(n, n);
  auto it = rows.begin();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = *it++;
  return m;
}

bool contains(const Spectrum& s, std::complex<double> z, double tol) {
  return std::any_of(s.eigenvalues.begin(), s.eigenvalues.end(),
                     [&](std::complex<double> l) { return std::abs(l - z) <= tol; });
}

Operator spd_op(std::size_t n, std::size_t k, double gamma, std::uint64_t seed) {
  return Operator(random_sparse_spd(n, 0.1, seed), TallMatrix(random_dense(n, k, seed + 100)), gamma);
}

Operator positive_real_op(std::size_t n, std::size_t k, double gamma, std::uint64_t seed) {
  const CsrMatrix s = random_sparse_spd(n, 0.1, seed);
  const CsrMatrix r = random_sparse(n, n, 0.08, seed + 1);
  return Operator(add(s, add(r, r.transposed(), 1.0, -1.0)), TallMatrix(random_dense(n, k, seed + 2)), gamma);
}

}  // namespace

TEST_CASE("jacobi examples") {
  DenseMatrix d(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  CHECK(eig_symmetric(d) == Vector{1.0, 2.0, 3.0});

  const Vector e = eig_symmetric(from_rows(2, {2.0, 1.0, 1.0, 2.0}));
  CHECK(e[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(e[1] == doctest::Approx(3.0).epsilon(1e-14));

  CHECK_THROWS_AS(eig_symmetric(from_rows(2, {1.0, 0.5, 0.0, 1.0})), InvalidArgument);
  CHECK_THROWS_AS(eig_symmetric(DenseMatrix(5, 5), 4), SizeCapExceeded);
}

TEST_CASE("jacobi trace and determinant oracle") {
  const DenseMatrix m = random_spd_dense(50, 3);
  const Vector e = eig_symmetric(m);
  CHECK(std::is_sorted(e.begin(), e.end()));
  double trace = 0.0;
  for (std::size_t i = 0; i < 50; ++i) trace += m(i, i);
  double sum = 0.0;
  for (double v : e) sum += v;
  CHECK(std::abs(sum - trace) <= 1e-10 * std::abs(trace));

  // log det from the Cholesky factor.
  const DenseCholesky c(m);
  double logdet = 0.0;
  for (std::size_t i = 0; i < 50; ++i) logdet += 2.0 * std::log(c.factor()(i, i));
  double logprod = 0.0;
  for (double v : e) logprod += std::log(v);
  CHECK(std::abs(std::exp(logprod - logdet) - 1.0) <= 1e-8);
}

TEST_CASE("francis qr examples") {
  const Spectrum rot = eig_general(from_rows(2, {0.0, 1.0, -1.0, 0.0}));
  REQUIRE(rot.eigenvalues.size() == 2);
  CHECK(contains(rot, {0.0, 1.0}, 1e-14));
  CHECK(contains(rot, {0.0, -1.0}, 1e-14));

  const Spectrum d = eig_general(from_rows(2, {2.0, 0.0, 0.0, 3.0}));
  CHECK(contains(d, 2.0, 1e-14));
  CHECK(contains(d, 3.0, 1e-14));

  // companion matrix of z^3 - 6z^2 + 11z - 6
  const Spectrum c = eig_general(from_rows(3, {6.0, -11.0, 6.0, 1.0, 0.0, 0.0, 0.0, 1.0, 0.0}));
  for (double root : {1.0, 2.0, 3.0}) CHECK(contains(c, root, 1e-8));
  CHECK(c.max_abs_im() <= 1e-8);

  CHECK_THROWS_AS(eig_general(DenseMatrix(5, 5), 4), SizeCapExceeded);
}

TEST_CASE("francis qr agrees with jacobi on symmetric input") {
  const DenseMatrix m = random_spd_dense(30, 8);
  const Vector e = eig_symmetric(m);
  const Spectrum s = eig_general(m).sorted();
  REQUIRE(s.eigenvalues.size() == 30);
  for (std::size_t i = 0; i < 30; ++i) {
    CHECK(std::abs(s.eigenvalues[i].real() - e[i]) <= 1e-9 * e.back());
    CHECK(std::abs(s.eigenvalues[i].imag()) <= 1e-9 * e.back());
  }
}

TEST_CASE("francis qr spectrum is transpose invariant and conjugate closed") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const std::size_t n = 20 + 7 * seed;
    const DenseMatrix m = random_dense(n, n, seed);
    const Spectrum a = eig_general(m).sorted();
    const Spectrum b = eig_general(m.transposed()).sorted();
    REQUIRE(a.eigenvalues.size() == n);
    double scale = 0.0;
    for (auto z : a.eigenvalues) scale = std::max(scale, std::abs(z));
    for (auto z : a.eigenvalues) {
      CHECK(contains(b, z, 1e-8 * scale));
      CHECK(contains(a, std::conj(z), 1e-8 * scale));
    }
    std::complex<double> sum = 0.0;
    for (auto z : a.eigenvalues) sum += z;
    double trace = 0.0;
    for (std::size_t i = 0; i < n; ++i) trace += m(i, i);
    CHECK(std::abs(sum.real() - trace) <= 1e-9 * scale * static_cast<double>(n));
  }
}

TEST_CASE("real eigenvector by inverse iteration") {
  const DenseMatrix m = from_rows(2, {2.0, 1.0, 0.0, 3.0});
  const Vector x = real_eigenvector(m, 3.0);
  CHECK(norm2(x) == doctest::Approx(1.0));
  const Vector mx = dense_mv(m, x);
  CHECK(std::abs(mx[0] - 3.0 * x[0]) <= 1e-10);
  CHECK(std::abs(mx[1] - 3.0 * x[1]) <= 1e-10);
}

TEST_CASE("preconditioned spectrum examples") {
  const Operator id(CsrMatrix::identity(4), TallMatrix(DenseMatrix(4, 1)), 1.0);
  const auto p = build_product(id, 1.0);
  const Spectrum dropped = preconditioned_spectrum(id, *p, ScalarConvention::Dropped);
  const Spectrum kept = preconditioned_spectrum(id, *p, ScalarConvention::Retained);
  for (auto z : dropped.eigenvalues) CHECK(std::abs(z - 0.5) <= 1e-14);
  for (auto z : kept.eigenvalues) CHECK(std::abs(z - 1.0) <= 1e-14);

  const Operator op = spd_op(40, 3, 2.0, 5);
  const Spectrum ex = preconditioned_spectrum(op, *build_exact_solve(CsrMatrix::from_dense(assemble_dense(op))));
  for (auto z : ex.eigenvalues) CHECK(std::abs(z - 1.0) <= 1e-10);

  CHECK_THROWS_AS(preconditioned_spectrum(op, *p), DimensionError);
  CHECK_THROWS_AS(preconditioned_spectrum(op, *build_product(op, 1.0), ScalarConvention::Dropped, 10),
                  SizeCapExceeded);
}

TEST_CASE("iteration matrix radius examples") {
  const Operator id(CsrMatrix::identity(3), TallMatrix(DenseMatrix(3, 1)), 1.0);
  CHECK(iteration_matrix_radius(id, 1.0) <= 1e-14);
  const Operator d(CsrMatrix::diagonal(Vector{1.0, 4.0}), TallMatrix(DenseMatrix(2, 1)), 1.0);
  CHECK(iteration_matrix_radius(d, 2.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("disk containment on positive-real operators") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const Operator op = positive_real_op(40, 4, std::pow(10.0, static_cast<double>(seed % 4) - 1.0), seed);
    for (double alpha : {0.1, 1.0, 10.0}) {
      const Spectrum s = preconditioned_spectrum(op, *build_product(op, alpha), ScalarConvention::Retained);
      CHECK(s.max_distance_from(1.0) < 1.0 + 1e-8);
      CHECK(s.max_abs_im() <= 1.0 + 1e-8);
      CHECK(iteration_matrix_radius(op, alpha) < 1.0);
    }
  }
}

TEST_CASE("bound examples") {
  CHECK(bound_mu(1.0, 1.0, 2.0) == doctest::Approx(0.5));
  CHECK(bound_re_lower(1.0, 1.0, 1.0) == doctest::Approx(8.0 / 17.0));
  CHECK(bound_re_lower(1e-12, 1.0, 1.0) < 1e-11);
  const auto [lo, hi] = bound_symm_interval(1.0, 1.0, 1.0);
  CHECK(lo == doctest::Approx(0.5));
  CHECK(hi == doctest::Approx(2.0));
  for (double alpha : {0.01, 0.7, 5.0})
    for (double lmin : {0.1, 1.0})
      CHECK(bound_symm_interval(alpha, 3.0, lmin).first == doctest::Approx(bound_mu(alpha, 3.0, 2.0 * lmin)));

  CHECK_THROWS_AS(bound_mu(0.0, 1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(bound_mu(1.0, -1.0, 1.0), InvalidArgument);
  CHECK_THROWS_AS(bound_re_lower(1.0, 1.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(eig_kernel_at(0.0, 1.0, 1.0), InvalidArgument);

  CHECK(eig_kernel_u(2.0, 2.0) == doctest::Approx(1.0));
  CHECK(eig_kernel_u(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(eig_kernel_at(2.0, 6.0, 3.0) == doctest::Approx(1.0));
  CHECK(eig_kernel_at(1e12, 1.0, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("lower bound values from the KKT table") {
  // lambda_min(A + A^T) back-solved from mu(alpha = 1, gamma = 1) = 0.1839.
  const double lmin = 4.0 * 0.1839;
  CHECK(lmin == doctest::Approx(0.7356));
  const std::pair<double, double> rows[] = {{0.001, 7.343e-04}, {0.01, 7.213e-03}, {0.1, 6.081e-02},
                                            {0.5, 1.635e-01},   {1.0, 1.839e-01},  {5.0, 1.022e-01},
                                            {10.0, 6.081e-02},  {20.0, 3.337e-02}};
  for (const auto& [alpha, expected] : rows) CHECK(std::abs(bound_mu(alpha, 1.0, lmin) / expected - 1.0) <= 5e-3);
}

TEST_CASE("eigenvalue for x in the kernel of U^T does not depend on gamma") {
  DenseMatrix u(2, 1);
  u(0, 0) = 1.0;
  for (double gamma : {0.5, 7.0}) {
    const Operator op(CsrMatrix::diagonal(Vector{2.0, 5.0}), TallMatrix(u), gamma);
    const Spectrum s = preconditioned_spectrum(op, *build_product(op, 3.0), ScalarConvention::Retained);
    CHECK(contains(s, eig_kernel_u(5.0, 3.0), 1e-9));
    CHECK(eig_kernel_u(5.0, 3.0) == doctest::Approx(1.25));
    const std::complex<double> r = rayleigh_lambda(op, 3.0, Vector{0.0, 1.0});
    CHECK(r.real() == doctest::Approx(1.25));
    CHECK(r.imag() == 0.0);
  }
}

TEST_CASE("eigenvalue for x in the kernel of A") {
  // A = diag(0, 3) singular, U = e1 so A_gamma is nonsingular and x = e1.
  const CsrMatrix a = CsrMatrix::from_triplets(2, 2, {{0, 0, 0.0}, {1, 1, 3.0}});
  DenseMatrix u(2, 1);
  u(0, 0) = 1.5;
  for (double gamma : {0.3, 4.0}) {
    const Operator op(a, TallMatrix(u), gamma);
    const double alpha = 2.0;
    const Spectrum s = preconditioned_spectrum(op, *build_product(op, alpha), ScalarConvention::Retained);
    CHECK(contains(s, eig_kernel_at(2.25, alpha, gamma), 1e-8));
  }
}

TEST_CASE("rayleigh formula reproduces real eigenvalues") {
  CHECK(rayleigh_lambda(Operator(CsrMatrix::identity(3), TallMatrix(random_dense(3, 1, 2)), 2.0), 1.0,
                        Vector{0.6, 0.0, 0.8})
            .real() == doctest::Approx(1.0));
  const Operator op = spd_op(30, 3, 1.0, 13);
  const double alpha = 0.8;
  const auto p = build_product(op, alpha);
  DenseMatrix m = preconditioned_matrix(op, *p);
  for (double& v : m.values()) v *= p->scalar_factor();
  const Spectrum s = eig_general(m);
  std::size_t checked = 0;
  for (auto z : s.eigenvalues) {
    if (std::abs(z.imag()) > 1e-12 || checked >= 5) continue;
    const Vector x = real_eigenvector(m, z.real());
    CHECK(std::abs(rayleigh_lambda(op, alpha, x).real() - z.real()) <= 1e-8);
    ++checked;
  }
  CHECK(checked > 0);
  CHECK_THROWS_AS(rayleigh_lambda(op, alpha, Vector(30, 1.0)), InvalidArgument);
}

TEST_CASE("real eigenvalues lie in [mu, 2) for SPD A") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto [op, rec] = normalize(spd_op(40, 3, 1.0, seed + 40));
    const double lsym = lambda_min_symmetric_part(op);
    for (double alpha : {0.1, 1.0, 5.0}) {
      const double mu = bound_mu(alpha, op.gamma(), lsym);
      const Spectrum s = preconditioned_spectrum(op, *build_product(op, alpha), ScalarConvention::Retained);
      double min_re = 1e300;
      for (auto z : s.eigenvalues) {
        min_re = std::min(min_re, z.real());
        if (std::abs(z.imag()) > 1e-10) continue;
        CHECK(z.real() >= mu - 1e-10);
        CHECK(z.real() < 2.0);
      }
      CHECK(min_re >= bound_re_lower(alpha, op.gamma(), lsym / 2.0) - 1e-10);
    }
  }
}

TEST_CASE("symmetrized spectra are real and inside the interval") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto [op, rec] = normalize(spd_op(40, 4, 1.0, seed + 60));
    const Vector ea = eig_symmetric(op.effective_a().to_dense());
    for (double alpha : {0.2, 1.0, 3.0}) {
      const auto p = build_symmetrized(op, alpha);
      const Spectrum s = preconditioned_spectrum(op, *p, ScalarConvention::Retained);
      const auto [lo, hi] = bound_symm_interval(alpha, op.gamma(), ea.front());
      CHECK(s.max_abs_im() <= 1e-8);
      CHECK(s.min_re() > lo - 1e-10);
      CHECK(s.max_re() < hi + 1e-10);
      // Same spectrum through the general solver.
      DenseMatrix m = preconditioned_matrix(op, *p);
      for (double& v : m.values()) v *= p->scalar_factor();
      const Spectrum g = eig_general(m);
      CHECK(std::abs(g.min_re() - s.min_re()) <= 1e-8 * s.max_re());
      CHECK(g.max_abs_im() <= 1e-8 * s.max_re());
    }
  }
}

TEST_CASE("rho bound") {
  const RhoBound b = rho_upper_and_alpha_star(Vector{1.0, 4.0});
  CHECK(b.alpha_star == doctest::Approx(2.0));
  CHECK(b(2.0) == doctest::Approx(1.0 / 3.0));
  const RhoBound one = rho_upper_and_alpha_star(Vector{1.0});
  CHECK(one.alpha_star == doctest::Approx(1.0));
  CHECK(one(1.0) == 0.0);
  CHECK_THROWS_AS(rho_upper_and_alpha_star(Vector{-1.0, 2.0}), InvalidArgument);

  const Operator op = spd_op(50, 3, 2.0, 77);
  const RhoBound rb = rho_upper_and_alpha_star(eig_symmetric(op.a().to_dense()));
  for (double alpha : {0.1, 0.5, rb.alpha_star, 3.0, 20.0})
    CHECK(iteration_matrix_radius(op, alpha) <= rb(alpha) + 1e-10);
  // alpha_star minimizes the bound.
  for (double f : {0.5, 0.9, 1.1, 2.0}) CHECK(rb(rb.alpha_star) <= rb(f * rb.alpha_star) + 1e-14);
}

TEST_CASE("alpha heuristic") {
  CHECK(alpha_heuristic(1.0) == 1.0);
  CHECK(alpha_heuristic(50.0) == doctest::Approx(7.0711).epsilon(1e-5));
  CHECK(alpha_heuristic(0.1) == doctest::Approx(0.31623).epsilon(1e-5));
}

TEST_CASE("mu is maximized at sqrt(gamma)") {
  for (double gamma : {0.1, 1.0, 50.0, 1e3}) {
    double best = 0.0;
    double arg = 0.0;
    const std::size_t pts = 400;
    const double lo = -4.0;
    const double hi = 4.0;
    const double step = (hi - lo) / static_cast<double>(pts - 1);
    for (std::size_t i = 0; i < pts; ++i) {
      const double alpha = std::pow(10.0, lo + step * static_cast<double>(i));
      const double mu = bound_mu(alpha, gamma, 1.0);
      if (mu > best) {
        best = mu;
        arg = alpha;
      }
    }
    CHECK(std::abs(std::log10(arg) - std::log10(std::sqrt(gamma))) <= step);
  }
}

TEST_CASE("bounds report") {
  const Operator id(CsrMatrix::identity(5), TallMatrix(random_dense(5, 1, 4)), 1.0);
  const auto [op, rec] = normalize(id);
  const BoundsReport r = compute_bounds_report(op, 1.0);
  CHECK(r.lambda_min_sym == doctest::Approx(2.0));
  CHECK(r.mu == doctest::Approx(bound_mu(1.0, op.gamma(), 2.0)));
  CHECK(r.alpha_heuristic == doctest::Approx(std::sqrt(op.gamma())));
  CHECK(r.min_re >= r.mu - 1e-10);
  CHECK(r.max_re < 2.0);

  const BoundsReport lazy = compute_bounds_report(op, 1.0, false);
  CHECK(std::isnan(lazy.min_re));

  const Operator pr = positive_real_op(20, 2, 1.0, 3);
  const BoundsReport nr = compute_bounds_report(pr, 1.0);
  CHECK(std::isnan(nr.lambda_min_a));
  CHECK(nr.lambda_min_sym > 0.0);
}
