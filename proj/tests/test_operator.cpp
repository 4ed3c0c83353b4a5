#include <cmath>

#include "doctest.h"
#include "lrsplit/errors.hpp"
#include "lrsplit/operator.hpp"
#include "support.hpp"

using namespace lrsplit;
using namespace testing;

namespace {

DenseMatrix assemble_oracle(const DenseMatrix& a, const DenseMatrix& u, double gamma) {
  return dense_add(a, dense_mm(u, u.transposed()), gamma);
}

DenseMatrix e1_column(std::size_t n) {
  DenseMatrix u(n, 1);
  u(0, 0) = 1.0;
  return u;
}

}  // namespace

TEST_CASE("operator construction checks") {
  const CsrMatrix a = CsrMatrix::identity(3);
  CHECK_THROWS_AS(Operator(a, TallMatrix(DenseMatrix(3, 3)), 1.0), InvalidArgument);
  CHECK_THROWS_AS(Operator(a, TallMatrix(DenseMatrix(3, 1)), 0.0), InvalidArgument);
  CHECK_THROWS_AS(Operator(a, TallMatrix(DenseMatrix(4, 1)), 1.0), DimensionError);
  CHECK_THROWS_AS(Operator(a, TallMatrix(DenseMatrix(3, 1)), 1.0, Vector{1.0, 0.0, 1.0}), InvalidArgument);
  CHECK_NOTHROW(Operator(a, TallMatrix(DenseMatrix(3, 0)), 1.0));
}

TEST_CASE("apply small cases") {
  const Operator z(CsrMatrix::identity(2), TallMatrix(DenseMatrix(2, 1)), 1.0);
  CHECK(z.apply(Vector{3.0, 4.0}) == Vector{3.0, 4.0});
  const Operator r1(CsrMatrix::zero(2, 2), TallMatrix(e1_column(2)), 2.0);
  CHECK(lrsplit::apply(r1, Vector{1.0, 1.0}) == Vector{2.0, 0.0});
  CHECK_THROWS_AS(r1.apply(Vector{1.0}), DimensionError);
}

TEST_CASE("apply matches dense assembly") {
  const CsrMatrix a = random_sparse(30, 30, 0.2, 9);
  const DenseMatrix u = random_dense(30, 5, 10);
  const Operator op(a, TallMatrix(u), 0.7);
  const DenseMatrix oracle = assemble_oracle(a.to_dense(), u, 0.7);
  const Vector x = random_vector(30, 11);
  CHECK(rel_diff(op.apply(x), dense_mv(oracle, x)) <= 1e-13);
  CHECK(rel_diff(assemble_dense(op), oracle) <= 1e-14);

  const Operator sparse_u(a, TallMatrix(CsrMatrix::from_dense(u)), 0.7);
  CHECK(rel_diff(sparse_u.apply(x), dense_mv(oracle, x)) <= 1e-13);
}

TEST_CASE("apply is linear and symmetric for symmetric A") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CsrMatrix a = random_sparse_spd(25, 0.2, seed);
    const Operator op(a, TallMatrix(random_dense(25, 3, seed + 1)), 2.5);
    CHECK(op.a_symmetric());
    const Vector x = random_vector(25, seed + 2);
    const Vector y = random_vector(25, seed + 3);
    Vector xy = x;
    axpy(1.0, y, xy);
    Vector sum = op.apply(x);
    axpy(1.0, op.apply(y), sum);
    CHECK(rel_diff(op.apply(xy), sum) <= 1e-13);
    const double l = dot(op.apply(x), y);
    const double r = dot(x, op.apply(y));
    CHECK(std::abs(l - r) <= 1e-12 * std::max(1.0, std::abs(l)));
  }
}

TEST_CASE("diag_gamma") {
  const Operator op(CsrMatrix::identity(2), TallMatrix(e1_column(2)), 2.0);
  CHECK(diag_gamma(op) == Vector{3.0, 1.0});
  const CsrMatrix a = CsrMatrix::diagonal(Vector{2.0, 5.0, 7.0});
  CHECK(diag_gamma(Operator(a, TallMatrix(DenseMatrix(3, 1)), 1.0)) == Vector{2.0, 5.0, 7.0});

  const CsrMatrix ra = random_sparse_spd(25, 0.2, 2);
  const DenseMatrix u = random_dense(25, 3, 2);
  const Operator rop(ra, TallMatrix(u), 1.3);
  const DenseMatrix dense = assemble_dense(rop);
  const Vector d = diag_gamma(rop);
  for (std::size_t i = 0; i < 25; ++i) CHECK(std::abs(d[i] - dense(i, i)) <= 1e-14 * dense(i, i));
}

TEST_CASE("diagonal scaling") {
  const Operator four(CsrMatrix::diagonal(Vector{4.0}), TallMatrix(DenseMatrix(1, 0)), 1.0);
  const Operator s4 = with_diagonal_scaling(four);
  CHECK(s4.apply(Vector{3.0}) == Vector{3.0});

  const CsrMatrix a = random_sparse_spd(30, 0.2, 4);
  const DenseMatrix u = random_dense(30, 4, 5);
  const Operator op(a, TallMatrix(u), 3.0);
  const Operator s = with_diagonal_scaling(op);
  REQUIRE(s.is_scaled());
  const DenseMatrix sd = assemble_dense(s);
  for (std::size_t i = 0; i < 30; ++i) CHECK(std::abs(sd(i, i) - 1.0) <= 1e-13);
  const Vector ds = diag_gamma(s);
  for (double v : ds) CHECK(std::abs(v - 1.0) <= 1e-14);

  const Vector x = random_vector(30, 6);
  const Vector& d = *s.scaling();
  Vector xs = x;
  for (std::size_t i = 0; i < 30; ++i) xs[i] /= d[i];
  Vector expect = op.apply(xs);
  for (std::size_t i = 0; i < 30; ++i) expect[i] /= d[i];
  CHECK(rel_diff(s.apply(x), expect) <= 1e-14);

  const Operator twice = with_diagonal_scaling(s);
  CHECK(rel_diff(twice.apply(x), s.apply(x)) <= 1e-15);

  const Operator bad(CsrMatrix::diagonal(Vector{1.0, -1.0, 2.0}), TallMatrix(DenseMatrix(3, 1)), 1.0);
  CHECK_THROWS_AS(with_diagonal_scaling(bad), InvalidArgument);
}

TEST_CASE("normalization") {
  DenseMatrix u(3, 1);
  u(0, 0) = 3.0;
  const Operator op(CsrMatrix::identity(3, 2.0), TallMatrix(u), 1.0);
  const auto [n, rec] = normalize(op);
  CHECK(rec.norm_a == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(rec.norm_u == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(rec.gamma_tilde == doctest::Approx(4.5).epsilon(1e-6));
  CHECK(n.gamma() == rec.gamma_tilde);

  const auto [again, rec2] = normalize(n);
  CHECK(rec2.norm_a == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rec2.norm_u == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(again.gamma() == doctest::Approx(n.gamma()).epsilon(1e-6));

  const CsrMatrix a = random_sparse_spd(30, 0.15, 8);
  const Operator r(a, TallMatrix(random_dense(30, 3, 9)), 5.0);
  const auto [rn, rr] = normalize(r);
  CHECK(rr.gamma_tilde == doctest::Approx(5.0 * rr.norm_u * rr.norm_u / rr.norm_a).epsilon(1e-14));
  const Vector x = random_vector(30, 10);
  Vector y = rn.apply(x);
  scale(rr.norm_a, y);
  CHECK(rel_diff(y, r.apply(x)) <= 1e-6);

  CHECK_THROWS_AS(normalize(Operator(CsrMatrix::zero(3, 3), TallMatrix(u), 1.0)), InvalidArgument);
}

TEST_CASE("assemble_dense cap") {
  const Operator op(CsrMatrix::identity(5), TallMatrix(DenseMatrix(5, 1)), 1.0);
  CHECK(rel_diff(assemble_dense(op), DenseMatrix::identity(5)) == 0.0);
  CHECK_THROWS_AS(assemble_dense(op, 4), SizeCapExceeded);
}

TEST_CASE("positive definiteness probe") {
  const Operator spd(random_sparse_spd(20, 0.2, 1), TallMatrix(random_dense(20, 2, 2)), 1.0);
  CHECK(probe_positive_definite(spd));
  const Operator neg(CsrMatrix::identity(4, -1.0), TallMatrix(DenseMatrix(4, 1)), 1.0);
  CHECK_FALSE(probe_positive_definite(neg));
  // Singular A whose kernel is covered by U.
  DenseMatrix u(3, 1);
  u(2, 0) = 1.0;
  const Operator cover(CsrMatrix::diagonal(Vector{1.0, 1.0, 0.0}), TallMatrix(u), 1.0);
  CHECK(probe_positive_definite(cover));
}

TEST_CASE("augmented Lagrangian builder") {
  const CsrMatrix a = random_sparse_spd(20, 0.2, 3);
  const CsrMatrix b = random_sparse(6, 20, 0.3, 4);
  const Operator id = from_augmented_lagrangian(a, b, Vector(6, 1.0), 1.0);
  CHECK(rel_diff(to_dense(id.u()), b.transposed().to_dense()) == 0.0);

  const CsrMatrix e1t = CsrMatrix::from_triplets(1, 3, {{0, 0, 1.0}});
  const Operator w4 = from_augmented_lagrangian(CsrMatrix::zero(3, 3), e1t, Vector{4.0}, 1.0);
  CHECK(w4.apply(Vector{1.0, 0.0, 0.0}) == Vector{0.25, 0.0, 0.0});

  Vector w(6);
  for (std::size_t i = 0; i < 6; ++i) w[i] = 0.5 + static_cast<double>(i);
  const double gamma = 3.0;
  const Operator op = from_augmented_lagrangian(a, b, w, gamma);
  DenseMatrix bt_winv_b(20, 20);
  const DenseMatrix bd = b.to_dense();
  for (std::size_t i = 0; i < 20; ++i)
    for (std::size_t j = 0; j < 20; ++j)
      for (std::size_t l = 0; l < 6; ++l) bt_winv_b(i, j) += bd(l, i) * bd(l, j) / w[l];
  CHECK(rel_diff(assemble_dense(op), dense_add(a.to_dense(), bt_winv_b, gamma)) <= 1e-13);
  CHECK_THROWS_AS(from_augmented_lagrangian(a, b, Vector(6, 0.0), 1.0), InvalidArgument);
}

TEST_CASE("KKT Schur builder") {
  const CsrMatrix h = tridiagonal(10, -1.0, 2.1, -1.0);
  const CsrMatrix c = random_sparse(3, 10, 0.4, 5);
  const Operator id = from_kkt_schur(h, c, Vector(3, 1.0), Vector(3, 1.0));
  CHECK(id.gamma() == 1.0);
  CHECK(rel_diff(to_dense(id.u()), c.transposed().to_dense()) <= 1e-15);

  const CsrMatrix e1t = CsrMatrix::from_triplets(1, 3, {{0, 0, 1.0}});
  const Operator four = from_kkt_schur(CsrMatrix::zero(3, 3), e1t, Vector{1.0}, Vector{4.0});
  CHECK(four.apply(Vector{1.0, 0.0, 0.0}) == Vector{4.0, 0.0, 0.0});

  const Vector z{0.5, 2.0, 10.0};
  const Vector lam{3.0, 0.1, 7.0};
  const Operator op = from_kkt_schur(h, c, z, lam);
  DenseMatrix schur(10, 10);
  const DenseMatrix cd = c.to_dense();
  for (std::size_t i = 0; i < 10; ++i)
    for (std::size_t j = 0; j < 10; ++j)
      for (std::size_t l = 0; l < 3; ++l) schur(i, j) += cd(l, i) * cd(l, j) * lam[l] / z[l];
  CHECK(rel_diff(assemble_dense(op), dense_add(h.to_dense(), schur)) <= 1e-13);
  CHECK_THROWS_AS(from_kkt_schur(h, c, Vector{1.0, -1.0, 1.0}, lam), InvalidArgument);
}

TEST_CASE("normal equations builder") {
  const CsrMatrix b1 = CsrMatrix::identity(4);
  DenseMatrix b2(1, 4);
  const NormalEquations zero = from_normal_equations(b1, b2);
  CHECK(rel_diff(assemble_dense(zero.op), DenseMatrix::identity(4)) == 0.0);
  b2(0, 0) = 1.0;
  const NormalEquations e1 = from_normal_equations(b1, b2);
  DenseMatrix expect = DenseMatrix::identity(4);
  expect(0, 0) = 2.0;
  CHECK(rel_diff(assemble_dense(e1.op), expect) == 0.0);

  const CsrMatrix rb1 = random_sparse(37, 15, 0.3, 6);
  const DenseMatrix rb2 = random_dense(3, 15, 7);
  const NormalEquations ne = from_normal_equations(rb1, rb2);
  DenseMatrix b(40, 15);
  const DenseMatrix d1 = rb1.to_dense();
  for (std::size_t j = 0; j < 15; ++j) {
    for (std::size_t i = 0; i < 37; ++i) b(i, j) = d1(i, j);
    for (std::size_t i = 0; i < 3; ++i) b(37 + i, j) = rb2(i, j);
  }
  const DenseMatrix btb = dense_mm(b.transposed(), b);
  CHECK(rel_diff(assemble_dense(ne.op), btb) <= 1e-12);
  const Vector c = random_vector(40, 8);
  CHECK(rel_diff(ne.rhs(c), dense_mv(b.transposed(), c)) <= 1e-13);
  CHECK_THROWS_AS(from_normal_equations(rb1, random_dense(3, 14, 1)), DimensionError);
}
