#pragma once

// Shared helpers for the test binaries: seeded random matrices and small
// dense reference routines that do not go through the library's solvers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lrsplit/dense.hpp"
#include "lrsplit/rng.hpp"
#include "lrsplit/sparse.hpp"
#include "lrsplit/vector.hpp"

namespace testing {

using lrsplit::CsrMatrix;
using lrsplit::DenseMatrix;
using lrsplit::Rng;
using lrsplit::Vector;

inline Vector random_vector(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  Vector v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

inline CsrMatrix random_sparse(std::size_t rows, std::size_t cols, double density, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<lrsplit::Triplet> t;
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (rng.uniform() < density) t.push_back({i, j, rng.uniform(-1.0, 1.0)});
  return CsrMatrix::from_triplets(rows, cols, std::move(t));
}

inline DenseMatrix random_dense(std::size_t rows, std::size_t cols, std::uint64_t seed) {
  Rng rng(seed);
  DenseMatrix m(rows, cols);
  for (double& x : m.values()) x = rng.normal();
  return m;
}

/// M^T M + shift I
inline DenseMatrix random_spd_dense(std::size_t n, std::uint64_t seed, double shift = 1.0) {
  const DenseMatrix g = random_dense(n, n, seed);
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t l = 0; l < n; ++l) s += g(l, i) * g(l, j);
      m(i, j) = s + (i == j ? shift : 0.0);
    }
  return m;
}

/// Sparse SPD: symmetric random pattern made diagonally dominant.
inline CsrMatrix random_sparse_spd(std::size_t n, double density, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<lrsplit::Triplet> t;
  Vector rowsum(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (rng.uniform() < density) {
        const double v = rng.uniform(-1.0, 1.0);
        t.push_back({i, j, v});
        t.push_back({j, i, v});
        rowsum[i] += std::abs(v);
        rowsum[j] += std::abs(v);
      }
  for (std::size_t i = 0; i < n; ++i) t.push_back({i, i, rowsum[i] + 1.0 + rng.uniform()});
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

/// 5-point Laplacian on an m-by-m grid plus shift I.
inline CsrMatrix laplacian_2d(std::size_t m, double shift = 0.0) {
  const std::size_t n = m * m;
  std::vector<lrsplit::Triplet> t;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t p = j * m + i;
      t.push_back({p, p, 4.0 + shift});
      if (i > 0) t.push_back({p, p - 1, -1.0});
      if (i + 1 < m) t.push_back({p, p + 1, -1.0});
      if (j > 0) t.push_back({p, p - m, -1.0});
      if (j + 1 < m) t.push_back({p, p + m, -1.0});
    }
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

inline CsrMatrix tridiagonal(std::size_t n, double lower, double diag, double upper) {
  std::vector<lrsplit::Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, diag});
    if (i > 0) t.push_back({i, i - 1, lower});
    if (i + 1 < n) t.push_back({i, i + 1, upper});
  }
  return CsrMatrix::from_triplets(n, n, std::move(t));
}

inline Vector dense_mv(const DenseMatrix& m, std::span<const double> x) {
  Vector y(m.rows(), 0.0);
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) y[i] += m(i, j) * x[j];
  return y;
}

inline DenseMatrix dense_mm(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t l = 0; l < a.cols(); ++l)
      for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) += a(i, l) * b(l, j);
  return c;
}

inline DenseMatrix dense_add(const DenseMatrix& a, const DenseMatrix& b, double s = 1.0) {
  DenseMatrix c = a;
  for (std::size_t i = 0; i < c.values().size(); ++i) c.values()[i] += s * b.values()[i];
  return c;
}

/// Gaussian elimination with partial pivoting on a row-major extended
/// precision matrix; solves for every column of the row-major `rhs`.
inline std::vector<long double> solve_extended(std::size_t n, std::vector<long double> a, std::size_t nr,
                                               std::vector<long double> rhs) {
  using Real = long double;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(a[i * n + k]) > std::abs(a[p * n + k])) p = i;
    if (a[p * n + k] == 0.0L) throw std::runtime_error("dense_solve: singular");
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a[k * n + j], a[p * n + j]);
      for (std::size_t j = 0; j < nr; ++j) std::swap(rhs[k * nr + j], rhs[p * nr + j]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const Real f = a[i * n + k] / a[k * n + k];
      if (f == 0.0L) continue;
      for (std::size_t j = k; j < n; ++j) a[i * n + j] -= f * a[k * n + j];
      for (std::size_t j = 0; j < nr; ++j) rhs[i * nr + j] -= f * rhs[k * nr + j];
    }
  }
  for (std::size_t c = 0; c < nr; ++c)
    for (std::size_t i = n; i-- > 0;) {
      Real s = rhs[i * nr + c];
      for (std::size_t j = i + 1; j < n; ++j) s -= a[i * n + j] * rhs[j * nr + c];
      rhs[i * nr + c] = s / a[i * n + i];
    }
  return rhs;
}

inline DenseMatrix dense_solve(const DenseMatrix& m, const DenseMatrix& rhs_in) {
  const std::size_t n = m.rows();
  const std::size_t nr = rhs_in.cols();
  std::vector<long double> a(n * n), rhs(n * nr);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) a[i * n + j] = m(i, j);
  for (std::size_t j = 0; j < nr; ++j)
    for (std::size_t i = 0; i < n; ++i) rhs[i * nr + j] = rhs_in(i, j);
  const std::vector<long double> x = solve_extended(n, std::move(a), nr, std::move(rhs));
  DenseMatrix out(n, nr);
  for (std::size_t c = 0; c < nr; ++c)
    for (std::size_t i = 0; i < n; ++i) out(i, c) = static_cast<double>(x[i * nr + c]);
  return out;
}

/// (alpha I + gamma U U^T)^{-1} r with the matrix itself formed in extended precision.
inline Vector shift_update_solve(const DenseMatrix& u, double alpha, double gamma, std::span<const double> r) {
  const std::size_t n = u.rows();
  std::vector<long double> a(n * n, 0.0L);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      long double s = 0.0L;
      for (std::size_t l = 0; l < u.cols(); ++l) s += static_cast<long double>(u(i, l)) * u(j, l);
      a[i * n + j] = static_cast<long double>(gamma) * s + (i == j ? static_cast<long double>(alpha) : 0.0L);
    }
  const std::vector<long double> x = solve_extended(n, std::move(a), 1, std::vector<long double>(r.begin(), r.end()));
  return Vector(x.begin(), x.end());
}

inline Vector dense_solve(const DenseMatrix& a, std::span<const double> b) {
  const DenseMatrix r(b.size(), 1, Vector(b.begin(), b.end()));
  const DenseMatrix x = dense_solve(a, r);
  return Vector(x.values().begin(), x.values().end());
}

inline DenseMatrix dense_inverse(const DenseMatrix& a) { return dense_solve(a, DenseMatrix::identity(a.rows())); }

inline double rel_diff(std::span<const double> x, std::span<const double> y) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (x[i] - y[i]) * (x[i] - y[i]);
    den += y[i] * y[i];
  }
  return den == 0.0 ? std::sqrt(num) : std::sqrt(num / den);
}

inline double rel_diff(const DenseMatrix& x, const DenseMatrix& y) { return rel_diff(x.values(), y.values()); }

/// ||M z - r|| / (||M||_F ||z|| + ||r||), accumulated in extended precision.
inline double backward_error(const DenseMatrix& m, std::span<const double> z, std::span<const double> r) {
  long double num = 0.0L;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    long double s = -static_cast<long double>(r[i]);
    for (std::size_t j = 0; j < m.cols(); ++j) s += static_cast<long double>(m(i, j)) * z[j];
    num += s * s;
  }
  return static_cast<double>(std::sqrt(num)) / (m.frobenius_norm() * lrsplit::norm2(z) + lrsplit::norm2(r));
}

inline double max_abs(const DenseMatrix& m) {
  double v = 0.0;
  for (double x : m.values()) v = std::max(v, std::abs(x));
  return v;
}

/// Counts L entries of the Cholesky factor of the symmetric pattern of `m`
/// under `perm` by eliminating on a dense boolean graph.
inline std::size_t symbolic_fill_count(const CsrMatrix& m, std::span<const std::size_t> perm) {
  const std::size_t n = m.rows();
  std::vector<std::size_t> pos(n);
  for (std::size_t i = 0; i < n; ++i) pos[perm[i]] = i;
  std::vector<std::vector<char>> g(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j : m.row_cols(i)) {
      g[pos[i]][pos[j]] = 1;
      g[pos[j]][pos[i]] = 1;
    }
  std::size_t count = 0;
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<std::size_t> nbr;
    for (std::size_t i = k + 1; i < n; ++i)
      if (g[i][k]) nbr.push_back(i);
    count += nbr.size() + 1;
    for (std::size_t a : nbr)
      for (std::size_t b : nbr) g[a][b] = 1;
  }
  return count;
}

/// Entries in the lower triangle of the symmetric pattern (diagonal included).
inline std::size_t lower_pattern_count(const CsrMatrix& m) {
  const CsrMatrix s = m.symmetric_pattern();
  std::size_t c = 0;
  for (std::size_t i = 0; i < s.rows(); ++i)
    for (std::size_t j : s.row_cols(i))
      if (j <= i) ++c;
  return c;
}

}  // namespace testing
