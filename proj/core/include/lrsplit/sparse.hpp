#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lrsplit/dense.hpp"
#include "lrsplit/vector.hpp"

namespace lrsplit {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// A permutation stored as new-to-old: entry i is the original index placed
/// at position i.
using Permutation = std::vector<std::size_t>;

Permutation invert(std::span<const std::size_t> perm);
bool is_permutation(std::span<const std::size_t> perm, std::size_t n);

/// Compressed sparse row matrix. Column indices are strictly increasing in
/// every row; duplicates are rejected by the validating constructor.
class CsrMatrix {
 public:
  CsrMatrix() : row_offsets_{0} {}
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_offsets,
            std::vector<std::size_t> col_indices, std::vector<double> values);

  /// Sorts entries and sums duplicates.
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols,
                                 std::vector<Triplet> entries);
  static CsrMatrix zero(std::size_t rows, std::size_t cols);
  static CsrMatrix identity(std::size_t n, double diag = 1.0);
  static CsrMatrix diagonal(std::span<const double> diag);
  /// Drops exact zeros.
  static CsrMatrix from_dense(const DenseMatrix& m);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_offsets() const noexcept { return row_offsets_; }
  std::span<const std::size_t> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const std::size_t> row_cols(std::size_t i) const {
    return {col_indices_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {values_.data() + row_offsets_[i], row_offsets_[i + 1] - row_offsets_[i]};
  }

  /// Stored value at (i, j), zero if not in the pattern.
  double at(std::size_t i, std::size_t j) const;

  CsrMatrix transposed() const;
  Vector diagonal_values() const;
  DenseMatrix to_dense() const;
  double frobenius_norm() const;
  /// max |a_ij - a_ji| over the union pattern.
  double max_asymmetry() const;
  bool is_symmetric(double rel_tol = 0.0) const;

  CsrMatrix scaled(double s) const;
  /// M + s*I; inserts missing diagonal entries.
  CsrMatrix shifted(double s) const;
  /// diag(left) * M * diag(right).
  CsrMatrix diag_scaled(std::span<const double> left, std::span<const double> right) const;
  /// Entries with col <= row (lower) or col >= row (upper).
  CsrMatrix lower_triangle() const;
  CsrMatrix upper_triangle() const;
  /// P M P^T, i.e. result(i, j) = M(perm[i], perm[j]).
  CsrMatrix permuted(std::span<const std::size_t> perm) const;
  /// Pattern of M + M^T with unit values on every entry (diagonal included).
  CsrMatrix symmetric_pattern() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_offsets_;
  std::vector<std::size_t> col_indices_;
  std::vector<double> values_;
};

/// M x or M^T x. Each output entry is accumulated in ascending column order.
Vector spmv(const CsrMatrix& m, std::span<const double> x, Trans trans = Trans::No);
/// a*X + b*Y on the union pattern.
CsrMatrix add(const CsrMatrix& x, const CsrMatrix& y, double a = 1.0, double b = 1.0);
CsrMatrix multiply(const CsrMatrix& x, const CsrMatrix& y);

}  // namespace lrsplit
