#include "lrsplit/dense.hpp"

#include <algorithm>
#include <cmath>

#include "lrsplit/errors.hpp"

namespace lrsplit {

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
  return s;
}

double norm2(std::span<const double> x) {
  // Scaled accumulation avoids overflow for very large entries.
  double scale_v = 0.0;
  double ssq = 1.0;
  for (double v : x) {
    if (v == 0.0) continue;
    const double a = std::abs(v);
    if (scale_v < a) {
      ssq = 1.0 + ssq * (scale_v / a) * (scale_v / a);
      scale_v = a;
    } else {
      ssq += (a / scale_v) * (a / scale_v);
    }
  }
  return scale_v * std::sqrt(ssq);
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw DimensionError("axpy: length mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += a * x[i];
}

void scale(double a, std::span<double> x) {
  for (double& v : x) v *= a;
}

Vector subtract(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("subtract: length mismatch");
  Vector r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
  return r;
}

bool all_finite(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return std::isfinite(v); });
}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> column_major)
    : rows_(rows), cols_(cols), values_(std::move(column_major)) {
  if (values_.size() != rows * cols) {
    throw DimensionError("DenseMatrix: value count does not match rows*cols");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) t(j, i) = (*this)(i, j);
  return t;
}

double DenseMatrix::frobenius_norm() const { return norm2(values_); }

double DenseMatrix::max_asymmetry() const {
  if (rows_ != cols_) throw DimensionError("max_asymmetry: matrix is not square");
  double worst = 0.0;
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = j + 1; i < rows_; ++i)
      worst = std::max(worst, std::abs((*this)(i, j) - (*this)(j, i)));
  return worst;
}

Vector matvec(const DenseMatrix& m, std::span<const double> x, Trans trans) {
  if (trans == Trans::No) {
    if (x.size() != m.cols()) throw DimensionError("matvec: dimension mismatch");
    Vector y(m.rows(), 0.0);
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double xj = x[j];
      if (xj == 0.0) continue;
      const auto col = m.column(j);
      for (std::size_t i = 0; i < m.rows(); ++i) y[i] += col[i] * xj;
    }
    return y;
  }
  if (x.size() != m.rows()) throw DimensionError("matvec: dimension mismatch");
  Vector y(m.cols(), 0.0);
  for (std::size_t j = 0; j < m.cols(); ++j) y[j] = dot(m.column(j), x);
  return y;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) throw DimensionError("matmul: dimension mismatch");
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    auto cj = c.column(j);
    for (std::size_t p = 0; p < a.cols(); ++p) {
      const double bpj = b(p, j);
      if (bpj == 0.0) continue;
      const auto ap = a.column(p);
      for (std::size_t i = 0; i < a.rows(); ++i) cj[i] += ap[i] * bpj;
    }
  }
  return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows()) throw DimensionError("matmul_tn: dimension mismatch");
  DenseMatrix c(a.cols(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j)
    for (std::size_t i = 0; i < a.cols(); ++i) c(i, j) = dot(a.column(i), b.column(j));
  return c;
}

}  // namespace lrsplit
