#include <cmath>

#include "lrsplit/errors.hpp"
#include "lrsplit/factor.hpp"

namespace lrsplit {

DenseCholesky::DenseCholesky(const DenseMatrix& m) : l_(m.rows(), m.cols()) {
  if (m.rows() != m.cols()) throw DimensionError("dense_cholesky: matrix is not square");
  const std::size_t n = m.rows();
  if (m.max_asymmetry() > 1e-12 * m.frobenius_norm()) {
    throw InvalidArgument("dense_cholesky: matrix is not symmetric");
  }
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l_(j, k) * l_(j, k);
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw NotPositiveDefinite("dense_cholesky: matrix is not positive definite", j);
    }
    const double ljj = std::sqrt(d);
    l_(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l_(i, k) * l_(j, k);
      l_(i, j) = s / ljj;
    }
  }
}

Vector DenseCholesky::solve_lower(std::span<const double> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw DimensionError("DenseCholesky: dimension mismatch");
  Vector x(b.begin(), b.end());
  for (std::size_t j = 0; j < n; ++j) {
    x[j] /= l_(j, j);
    const double xj = x[j];
    const auto col = l_.column(j);
    for (std::size_t i = j + 1; i < n; ++i) x[i] -= col[i] * xj;
  }
  return x;
}

Vector DenseCholesky::solve_lower_transposed(std::span<const double> b) const {
  const std::size_t n = size();
  if (b.size() != n) throw DimensionError("DenseCholesky: dimension mismatch");
  Vector x(b.begin(), b.end());
  for (std::size_t j = n; j-- > 0;) {
    const auto col = l_.column(j);
    double s = x[j];
    for (std::size_t i = j + 1; i < n; ++i) s -= col[i] * x[i];
    x[j] = s / l_(j, j);
  }
  return x;
}

Vector DenseCholesky::solve(std::span<const double> b) const {
  return solve_lower_transposed(solve_lower(b));
}

DenseCholesky dense_cholesky(const DenseMatrix& m) { return DenseCholesky(m); }

}  // namespace lrsplit
