#include "lrsplit/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lrsplit/errors.hpp"

namespace lrsplit {

Permutation invert(std::span<const std::size_t> perm) {
  Permutation inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[perm[i]] = i;
  return inv;
}

bool is_permutation(std::span<const std::size_t> perm, std::size_t n) {
  if (perm.size() != n) return false;
  std::vector<char> seen(n, 0);
  for (std::size_t p : perm) {
    if (p >= n || seen[p]) return false;
    seen[p] = 1;
  }
  return true;
}

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
                     std::vector<std::size_t> col_indices, std::vector<double> values)
    : rows_(rows),
      cols_(cols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)) {
  if (row_offsets_.size() != rows_ + 1 || row_offsets_.front() != 0) {
    throw InvalidArgument("CsrMatrix: row_offsets must have rows+1 entries starting at 0");
  }
  if (row_offsets_.back() != values_.size() || col_indices_.size() != values_.size()) {
    throw InvalidArgument("CsrMatrix: row_offsets[rows] must equal the number of entries");
  }
  for (std::size_t i = 0; i < rows_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i]) {
      throw InvalidArgument("CsrMatrix: row_offsets must be nondecreasing");
    }
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      if (col_indices_[p] >= cols_) throw InvalidArgument("CsrMatrix: column index out of range");
      if (p > row_offsets_[i] && col_indices_[p] <= col_indices_[p - 1]) {
        throw InvalidArgument("CsrMatrix: column indices must be strictly increasing per row");
      }
    }
  }
}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (t.row >= rows || t.col >= cols) {
      throw InvalidArgument("from_triplets: index out of range");
    }
  }
  std::stable_sort(entries.begin(), entries.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<std::size_t> offsets(rows + 1, 0);
  std::vector<std::size_t> cols_out;
  std::vector<double> vals;
  cols_out.reserve(entries.size());
  vals.reserve(entries.size());
  for (std::size_t p = 0; p < entries.size();) {
    const auto& t = entries[p];
    double sum = 0.0;
    std::size_t q = p;
    while (q < entries.size() && entries[q].row == t.row && entries[q].col == t.col) {
      sum += entries[q].value;
      ++q;
    }
    cols_out.push_back(t.col);
    vals.push_back(sum);
    ++offsets[t.row + 1];
    p = q;
  }
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  return CsrMatrix(rows, cols, std::move(offsets), std::move(cols_out), std::move(vals));
}

CsrMatrix CsrMatrix::zero(std::size_t rows, std::size_t cols) {
  return CsrMatrix(rows, cols, std::vector<std::size_t>(rows + 1, 0), {}, {});
}

CsrMatrix CsrMatrix::identity(std::size_t n, double diag) {
  std::vector<double> d(n, diag);
  return diagonal(d);
}

CsrMatrix CsrMatrix::diagonal(std::span<const double> diag) {
  const std::size_t n = diag.size();
  std::vector<std::size_t> offsets(n + 1);
  std::vector<std::size_t> cols(n);
  std::iota(offsets.begin(), offsets.end(), std::size_t{0});
  std::iota(cols.begin(), cols.end(), std::size_t{0});
  return CsrMatrix(n, n, std::move(offsets), std::move(cols), Vector(diag.begin(), diag.end()));
}

CsrMatrix CsrMatrix::from_dense(const DenseMatrix& m) {
  std::vector<std::size_t> offsets(m.rows() + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) != 0.0) {
        cols.push_back(j);
        vals.push_back(m(i, j));
      }
    }
    offsets[i + 1] = vals.size();
  }
  return CsrMatrix(m.rows(), m.cols(), std::move(offsets), std::move(cols), std::move(vals));
}

double CsrMatrix::at(std::size_t i, std::size_t j) const {
  const auto cols = row_cols(i);
  const auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values_[row_offsets_[i] + static_cast<std::size_t>(it - cols.begin())];
}

CsrMatrix CsrMatrix::transposed() const {
  std::vector<std::size_t> offsets(cols_ + 1, 0);
  for (std::size_t c : col_indices_) ++offsets[c + 1];
  std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
  std::vector<std::size_t> next(offsets.begin(), offsets.end() - 1);
  std::vector<std::size_t> cols(nnz());
  std::vector<double> vals(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      const std::size_t dst = next[col_indices_[p]]++;
      cols[dst] = i;
      vals[dst] = values_[p];
    }
  }
  return CsrMatrix(cols_, rows_, std::move(offsets), std::move(cols), std::move(vals));
}

Vector CsrMatrix::diagonal_values() const {
  const std::size_t n = std::min(rows_, cols_);
  Vector d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) d[i] = at(i, i);
  return d;
}

DenseMatrix CsrMatrix::to_dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      d(i, col_indices_[p]) = values_[p];
  return d;
}

double CsrMatrix::frobenius_norm() const { return norm2(values_); }

double CsrMatrix::max_asymmetry() const {
  if (rows_ != cols_) throw DimensionError("max_asymmetry: matrix is not square");
  const CsrMatrix diff = add(*this, transposed(), 1.0, -1.0);
  double worst = 0.0;
  for (double v : diff.values()) worst = std::max(worst, std::abs(v));
  return worst;
}

bool CsrMatrix::is_symmetric(double rel_tol) const {
  if (rows_ != cols_) return false;
  return max_asymmetry() <= rel_tol * frobenius_norm();
}

CsrMatrix CsrMatrix::scaled(double s) const {
  Vector vals(values_);
  for (double& v : vals) v *= s;
  return CsrMatrix(rows_, cols_, row_offsets_, col_indices_, std::move(vals));
}

CsrMatrix CsrMatrix::shifted(double s) const {
  if (rows_ != cols_) throw DimensionError("shifted: matrix is not square");
  return add(*this, identity(rows_), 1.0, s);
}

CsrMatrix CsrMatrix::diag_scaled(std::span<const double> left,
                                 std::span<const double> right) const {
  if (left.size() != rows_ || right.size() != cols_) {
    throw DimensionError("diag_scaled: scaling length mismatch");
  }
  Vector vals(values_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      vals[p] *= left[i] * right[col_indices_[p]];
  return CsrMatrix(rows_, cols_, row_offsets_, col_indices_, std::move(vals));
}

namespace {

template <class Keep>
CsrMatrix filter(const CsrMatrix& m, Keep keep) {
  std::vector<std::size_t> offsets(m.rows() + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const auto rc = m.row_cols(i);
    const auto rv = m.row_values(i);
    for (std::size_t p = 0; p < rc.size(); ++p) {
      if (keep(i, rc[p])) {
        cols.push_back(rc[p]);
        vals.push_back(rv[p]);
      }
    }
    offsets[i + 1] = vals.size();
  }
  return CsrMatrix(m.rows(), m.cols(), std::move(offsets), std::move(cols), std::move(vals));
}

}  // namespace

CsrMatrix CsrMatrix::lower_triangle() const {
  return filter(*this, [](std::size_t i, std::size_t j) { return j <= i; });
}

CsrMatrix CsrMatrix::upper_triangle() const {
  return filter(*this, [](std::size_t i, std::size_t j) { return j >= i; });
}

CsrMatrix CsrMatrix::permuted(std::span<const std::size_t> perm) const {
  if (rows_ != cols_ || !is_permutation(perm, rows_)) {
    throw InvalidArgument("permuted: needs a square matrix and a valid permutation");
  }
  const Permutation inv = invert(perm);
  std::vector<std::size_t> offsets(rows_ + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(nnz());
  vals.reserve(nnz());
  std::vector<std::pair<std::size_t, double>> row;
  for (std::size_t i = 0; i < rows_; ++i) {
    const std::size_t src = perm[i];
    row.clear();
    for (std::size_t p = row_offsets_[src]; p < row_offsets_[src + 1]; ++p) {
      row.emplace_back(inv[col_indices_[p]], values_[p]);
    }
    std::sort(row.begin(), row.end());
    for (const auto& [c, v] : row) {
      cols.push_back(c);
      vals.push_back(v);
    }
    offsets[i + 1] = vals.size();
  }
  return CsrMatrix(rows_, cols_, std::move(offsets), std::move(cols), std::move(vals));
}

CsrMatrix CsrMatrix::symmetric_pattern() const {
  if (rows_ != cols_) throw DimensionError("symmetric_pattern: matrix is not square");
  std::vector<Triplet> t;
  t.reserve(2 * nnz() + rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    t.push_back({i, i, 1.0});
    for (std::size_t p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      t.push_back({i, col_indices_[p], 1.0});
      t.push_back({col_indices_[p], i, 1.0});
    }
  }
  CsrMatrix summed = from_triplets(rows_, cols_, std::move(t));
  Vector ones(summed.nnz(), 1.0);
  return CsrMatrix(rows_, cols_, summed.row_offsets_, summed.col_indices_, std::move(ones));
}

Vector spmv(const CsrMatrix& m, std::span<const double> x, Trans trans) {
  const auto offsets = m.row_offsets();
  const auto cols = m.col_indices();
  const auto vals = m.values();
  if (trans == Trans::No) {
    if (x.size() != m.cols()) throw DimensionError("spmv: dimension mismatch");
    Vector y(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
      double s = 0.0;
      for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) s += vals[p] * x[cols[p]];
      y[i] = s;
    }
    return y;
  }
  if (x.size() != m.rows()) throw DimensionError("spmv: dimension mismatch");
  Vector y(m.cols(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const double xi = x[i];
    for (std::size_t p = offsets[i]; p < offsets[i + 1]; ++p) y[cols[p]] += vals[p] * xi;
  }
  return y;
}

CsrMatrix add(const CsrMatrix& x, const CsrMatrix& y, double a, double b) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw DimensionError("add: dimension mismatch");
  }
  std::vector<std::size_t> offsets(x.rows() + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  cols.reserve(x.nnz() + y.nnz());
  vals.reserve(x.nnz() + y.nnz());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    const auto xc = x.row_cols(i);
    const auto xv = x.row_values(i);
    const auto yc = y.row_cols(i);
    const auto yv = y.row_values(i);
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < xc.size() || q < yc.size()) {
      if (q == yc.size() || (p < xc.size() && xc[p] < yc[q])) {
        cols.push_back(xc[p]);
        vals.push_back(a * xv[p]);
        ++p;
      } else if (p == xc.size() || yc[q] < xc[p]) {
        cols.push_back(yc[q]);
        vals.push_back(b * yv[q]);
        ++q;
      } else {
        cols.push_back(xc[p]);
        vals.push_back(a * xv[p] + b * yv[q]);
        ++p;
        ++q;
      }
    }
    offsets[i + 1] = vals.size();
  }
  return CsrMatrix(x.rows(), x.cols(), std::move(offsets), std::move(cols), std::move(vals));
}

CsrMatrix multiply(const CsrMatrix& x, const CsrMatrix& y) {
  if (x.cols() != y.rows()) throw DimensionError("multiply: dimension mismatch");
  const std::size_t nc = y.cols();
  std::vector<std::size_t> offsets(x.rows() + 1, 0);
  std::vector<std::size_t> cols;
  std::vector<double> vals;
  std::vector<double> acc(nc, 0.0);
  std::vector<std::size_t> marker(nc, static_cast<std::size_t>(-1));
  std::vector<std::size_t> row_pattern;
  for (std::size_t i = 0; i < x.rows(); ++i) {
    row_pattern.clear();
    const auto xc = x.row_cols(i);
    const auto xv = x.row_values(i);
    for (std::size_t p = 0; p < xc.size(); ++p) {
      const auto yc = y.row_cols(xc[p]);
      const auto yv = y.row_values(xc[p]);
      for (std::size_t q = 0; q < yc.size(); ++q) {
        const std::size_t c = yc[q];
        if (marker[c] != i) {
          marker[c] = i;
          acc[c] = 0.0;
          row_pattern.push_back(c);
        }
        acc[c] += xv[p] * yv[q];
      }
    }
    std::sort(row_pattern.begin(), row_pattern.end());
    for (std::size_t c : row_pattern) {
      cols.push_back(c);
      vals.push_back(acc[c]);
    }
    offsets[i + 1] = vals.size();
  }
  return CsrMatrix(x.rows(), nc, std::move(offsets), std::move(cols), std::move(vals));
}

}  // namespace lrsplit
