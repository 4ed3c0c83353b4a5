#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "lrsplit/errors.hpp"
#include "lrsplit/matrix_market.hpp"
#include "lrsplit/norm.hpp"
#include "lrsplit/ordering.hpp"
#include "lrsplit/sparse.hpp"
#include "lrsplit/spectra.hpp"
#include "lrsplit/tall.hpp"
#include "support.hpp"

using namespace lrsplit;
using namespace testing;

TEST_CASE("csr constructor validates structure") {
  CHECK_NOTHROW(CsrMatrix(2, 2, {0, 1, 2}, {0, 1}, {1.0, 2.0}));
  CHECK_THROWS_AS(CsrMatrix(2, 2, {0, 2, 2}, {1, 1}, {1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(CsrMatrix(2, 2, {0, 1, 2}, {0, 2}, {1.0, 2.0}), InvalidArgument);
  CHECK_THROWS_AS(CsrMatrix(2, 2, {1, 1, 2}, {0, 1}, {1.0, 2.0}), InvalidArgument);
}

TEST_CASE("from_triplets sums duplicates and sorts") {
  const CsrMatrix m = CsrMatrix::from_triplets(2, 3, {{1, 2, 1.0}, {0, 1, 2.0}, {1, 0, 3.0}, {1, 2, 4.0}});
  CHECK(m.nnz() == 3);
  CHECK(m.at(1, 2) == 5.0);
  CHECK(m.at(0, 1) == 2.0);
  CHECK(m.at(0, 0) == 0.0);
  const auto cols = m.row_cols(1);
  CHECK(std::is_sorted(cols.begin(), cols.end()));
}

TEST_CASE("spmv small cases") {
  const Vector x{1.0, 2.0, 3.0};
  CHECK(spmv(CsrMatrix::identity(3), x) == x);
  const CsrMatrix m = CsrMatrix::from_triplets(2, 2, {{0, 0, 1.0}, {0, 1, 2.0}, {1, 1, 3.0}});
  CHECK(spmv(m, Vector{1.0, 1.0}) == Vector{3.0, 3.0});
  CHECK(spmv(m, Vector{1.0, 1.0}, Trans::Yes) == Vector{1.0, 5.0});
  CHECK_THROWS_AS(spmv(m, x), DimensionError);
}

TEST_CASE("spmv matches dense product") {
  const CsrMatrix m = random_sparse(30, 20, 0.2, 7);
  const DenseMatrix d = m.to_dense();
  const Vector x = random_vector(20, 1);
  CHECK(rel_diff(spmv(m, x), dense_mv(d, x)) <= 1e-14);
  const Vector y = random_vector(30, 2);
  CHECK(rel_diff(spmv(m, y, Trans::Yes), dense_mv(d.transposed(), y)) <= 1e-14);
}

TEST_CASE("spmv is linear and adjoint-consistent") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CsrMatrix m = random_sparse(25, 18, 0.25, seed);
    const Vector x = random_vector(18, seed + 100);
    const Vector y = random_vector(18, seed + 200);
    Vector xy = x;
    axpy(1.0, y, xy);
    Vector sum = spmv(m, x);
    axpy(1.0, spmv(m, y), sum);
    CHECK(rel_diff(spmv(m, xy), sum) <= 1e-13);

    const Vector z = random_vector(25, seed + 300);
    const double lhs = dot(spmv(m, x), z);
    const double rhs = dot(x, spmv(m, z, Trans::Yes));
    CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(lhs)));
  }
}

TEST_CASE("csr transforms") {
  const CsrMatrix m = CsrMatrix::from_triplets(3, 3, {{0, 0, 4.0}, {0, 2, 1.0}, {1, 1, 2.0}, {2, 0, 3.0}});
  CHECK(m.transposed().at(2, 0) == 1.0);
  CHECK(m.transposed().at(0, 2) == 3.0);
  CHECK(m.max_asymmetry() == 2.0);
  CHECK_FALSE(m.is_symmetric());
  const CsrMatrix s = m.shifted(1.0);
  CHECK(s.at(2, 2) == 1.0);
  CHECK(s.at(0, 0) == 5.0);
  const Permutation p{2, 0, 1};
  const CsrMatrix pm = m.permuted(p);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(pm.at(i, j) == m.at(p[i], p[j]));
  const Vector l{1.0, 2.0, 3.0};
  const CsrMatrix ds = m.diag_scaled(l, l);
  CHECK(ds.at(0, 2) == 3.0);
  CHECK(ds.at(2, 0) == 9.0);
  CHECK(add(m, m, 1.0, -1.0).frobenius_norm() == 0.0);
  const DenseMatrix prod = multiply(m, m).to_dense();
  CHECK(rel_diff(prod, dense_mm(m.to_dense(), m.to_dense())) <= 1e-15);
}

TEST_CASE("tall_apply dispatch") {
  DenseMatrix e1(2, 1);
  e1(0, 0) = 1.0;
  CHECK(tall_apply(TallMatrix(e1), Vector{5.0, 7.0}, Trans::Yes) == Vector{5.0});
  const TallMatrix z = CsrMatrix::zero(4, 2);
  CHECK(tall_apply(z, Vector{1.0, 2.0}) == Vector(4, 0.0));

  const DenseMatrix u = random_dense(25, 4, 3);
  const Vector x = random_vector(4, 4);
  CHECK(rel_diff(tall_apply(TallMatrix(u), x), dense_mv(u, x)) <= 1e-14);
  const Vector y = random_vector(25, 5);
  CHECK(rel_diff(tall_apply(TallMatrix(u), y, Trans::Yes), dense_mv(u.transposed(), y)) <= 1e-14);
  const TallMatrix us = CsrMatrix::from_dense(u);
  CHECK(rel_diff(tall_apply(us, x), dense_mv(u, x)) <= 1e-14);
  CHECK(rows(us) == 25);
  CHECK(cols(us) == 4);
}

TEST_CASE("matrix market read") {
  std::istringstream diag("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n2 2 2.0\n");
  const CsrMatrix d = std::get<CsrMatrix>(mm_read(diag));
  CHECK(d.at(0, 0) == 1.0);
  CHECK(d.at(1, 1) == 2.0);
  CHECK(d.nnz() == 2);

  std::istringstream sym("%%MatrixMarket matrix coordinate real symmetric\n% comment\n2 2 1\n2 1 3.0\n");
  const CsrMatrix s = std::get<CsrMatrix>(mm_read(sym));
  CHECK(s.at(0, 1) == 3.0);
  CHECK(s.at(1, 0) == 3.0);

  std::istringstream dup("%%MatrixMarket matrix coordinate real general\n1 1 2\n1 1 1.5\n1 1 2.5\n");
  CHECK(std::get<CsrMatrix>(mm_read(dup)).at(0, 0) == 4.0);

  std::istringstream arr("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
  const DenseMatrix a = std::get<DenseMatrix>(mm_read(arr));
  CHECK(a(1, 0) == 2.0);
  CHECK(a(0, 1) == 3.0);
}

TEST_CASE("matrix market errors name the line") {
  std::istringstream banner("%%MatrixMarket matrix coordinate complex general\n1 1 1\n1 1 1 0\n");
  CHECK_THROWS_AS(mm_read(banner), ParseError);
  std::istringstream range("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1.0\n");
  try {
    mm_read(range);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  std::istringstream empty("");
  CHECK_THROWS_AS(mm_read(empty), ParseError);
}

TEST_CASE("matrix market round trip") {
  const CsrMatrix m = random_sparse(30, 20, 0.2, 7);
  std::stringstream io;
  mm_write(m, io);
  const CsrMatrix r = std::get<CsrMatrix>(mm_read(io));
  CHECK(r.rows() == 30);
  CHECK(r.cols() == 20);
  CHECK(rel_diff(r.to_dense(), m.to_dense()) <= 1e-15);

  const DenseMatrix d = random_dense(6, 3, 9);
  std::stringstream io2;
  mm_write(d, io2);
  CHECK(rel_diff(std::get<DenseMatrix>(mm_read(io2)), d) <= 1e-15);

  std::stringstream io3;
  mm_write(CsrMatrix::zero(3, 3), io3);
  std::string banner, size;
  std::getline(io3, banner);
  std::getline(io3, size);
  CHECK(size == "3 3 0");

  std::stringstream io4;
  mm_write(CsrMatrix::diagonal(Vector{1.0, 2.0}), io4);
  std::string line;
  int data = 0;
  std::getline(io4, line);
  std::getline(io4, line);
  while (std::getline(io4, line)) ++data;
  CHECK(data == 2);
}

TEST_CASE("format_real uses 17 significant digits") {
  CHECK(format_real(0.1) == "0.10000000000000001");
  CHECK(format_real(1.0) == "1");
  CHECK(std::stod(format_real(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("two-norm estimate") {
  const NormEstimate d = two_norm_estimate(CsrMatrix::diagonal(Vector{1.0, 2.0, 3.0}), 1e-10);
  CHECK(d.converged);
  CHECK(std::abs(d.value - 3.0) <= 1e-8);

  DenseMatrix e1(5, 1);
  e1(0, 0) = 1.0;
  CHECK(std::abs(two_norm_estimate(TallMatrix(e1)).value - 1.0) <= 1e-12);

  DenseMatrix m22(2, 2);
  m22(0, 0) = 3.0;
  m22(0, 1) = 1.0;
  m22(1, 1) = 2.0;
  const double a = 9.0, b = 3.0, c = 5.0;  // M^T M
  const double sigma = std::sqrt(0.5 * (a + c) + std::sqrt(0.25 * (a - c) * (a - c) + b * b));
  CHECK(std::abs(two_norm_estimate(TallMatrix(m22)).value - sigma) <= 1e-6 * sigma);
}

TEST_CASE("two-norm estimate against a Jacobi oracle") {
  const DenseMatrix m = random_dense(40, 40, 11);
  const Vector eig = eig_symmetric(dense_mm(m.transposed(), m));
  const double sigma = std::sqrt(eig.back());
  CHECK(std::abs(two_norm_estimate(TallMatrix(m)).value - sigma) <= 1e-6 * sigma);
}

TEST_CASE("two-norm estimate bracket") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const CsrMatrix m = random_sparse(40, 30, 0.2, seed);
    const double est = two_norm_estimate(m).value;
    double maxcol = 0.0;
    const DenseMatrix d = m.to_dense();
    for (std::size_t j = 0; j < d.cols(); ++j) maxcol = std::max(maxcol, norm2(d.column(j)));
    CHECK(est <= m.frobenius_norm() * (1.0 + 1e-6));
    CHECK(est >= maxcol * (1.0 - 1e-6));
  }
}

TEST_CASE("amd ordering basics") {
  const Permutation d = amd_ordering(CsrMatrix::identity(5));
  CHECK(d == Permutation{0, 1, 2, 3, 4});

  const CsrMatrix tri = tridiagonal(5, -1.0, 2.0, -1.0);
  const Permutation pt = amd_ordering(tri);
  CHECK(is_permutation(pt, 5));
  CHECK(symbolic_fill_count(tri, pt) == lower_pattern_count(tri));

  std::vector<Triplet> t;
  for (std::size_t i = 0; i < 6; ++i) {
    t.push_back({i, i, 10.0});
    if (i > 0) {
      t.push_back({0, i, 1.0});
      t.push_back({i, 0, 1.0});
    }
  }
  const CsrMatrix arrow = CsrMatrix::from_triplets(6, 6, t);
  const Permutation pa = amd_ordering(arrow);
  CHECK(is_permutation(pa, 6));
  CHECK(symbolic_fill_count(arrow, pa) == lower_pattern_count(arrow));
  // The hub stays among the last two eliminated; the final pair is a
  // clique, so either order is fill-free.
  const auto hub = std::find(pa.begin(), pa.end(), 0) - pa.begin();
  CHECK(hub >= 4);
}

TEST_CASE("amd reduces fill on a grid Laplacian") {
  const CsrMatrix lap = laplacian_2d(20);
  Permutation natural(lap.rows());
  std::iota(natural.begin(), natural.end(), std::size_t{0});
  const Permutation p = amd_ordering(lap);
  CHECK(is_permutation(p, lap.rows()));
  CHECK(symbolic_fill_count(lap, p) <= symbolic_fill_count(lap, natural));
}

TEST_CASE("amd output is a bijection on random patterns") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const CsrMatrix m = random_sparse(60, 60, 0.05, seed);
    Permutation p = amd_ordering(m);
    std::sort(p.begin(), p.end());
    for (std::size_t i = 0; i < p.size(); ++i) CHECK(p[i] == i);
  }
}

TEST_CASE("amd symmetrizes nonsymmetric patterns") {
  const CsrMatrix m = CsrMatrix::from_triplets(4, 4, {{0, 0, 1}, {1, 1, 1}, {2, 2, 1}, {3, 3, 1}, {0, 3, 1}});
  const Permutation p = amd_ordering(m);
  CHECK(is_permutation(p, 4));
  CHECK(symbolic_fill_count(m, p) == lower_pattern_count(m));
}
