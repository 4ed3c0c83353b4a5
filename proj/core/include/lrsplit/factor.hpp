#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "lrsplit/dense.hpp"
#include "lrsplit/sparse.hpp"

namespace lrsplit {

// ---------------------------------------------------------------------------
// Triangular solves on CSR factors. The diagonal must be stored explicitly;
// a missing or zero diagonal throws FactorizationError with the row index.

/// L x = b for lower-triangular L.
Vector solve_lower(const CsrMatrix& l, std::span<const double> b);
/// L^T x = b for lower-triangular L.
Vector solve_lower_transposed(const CsrMatrix& l, std::span<const double> b);
/// U x = b for upper-triangular U.
Vector solve_upper(const CsrMatrix& u, std::span<const double> b);

// ---------------------------------------------------------------------------

/// Dense Cholesky factor M = L L^T.
class DenseCholesky {
 public:
  /// Throws InvalidArgument if M is not symmetric to 1e-12 * ||M||_F and
  /// NotPositiveDefinite with the failing column on a nonpositive pivot.
  explicit DenseCholesky(const DenseMatrix& m);

  std::size_t size() const noexcept { return l_.rows(); }
  const DenseMatrix& factor() const noexcept { return l_; }
  Vector solve(std::span<const double> b) const;
  Vector solve_lower(std::span<const double> b) const;
  Vector solve_lower_transposed(std::span<const double> b) const;

 private:
  DenseMatrix l_;
};

DenseCholesky dense_cholesky(const DenseMatrix& m);

// ---------------------------------------------------------------------------

/// Elimination tree of a symmetric pattern (lower triangle is read).
/// parent[i] == n marks a root.
std::vector<std::size_t> elimination_tree(const CsrMatrix& m);

/// Exact pattern of the Cholesky factor of M (no cancellation), unit values.
CsrMatrix cholesky_fill_pattern(const CsrMatrix& m);

/// Up-looking sparse Cholesky of P M P^T = L L^T with elimination-tree
/// symbolic analysis.
class SparseCholesky {
 public:
  SparseCholesky(const CsrMatrix& m, Permutation perm);

  std::size_t size() const noexcept { return l_.rows(); }
  const Permutation& perm() const noexcept { return perm_; }
  /// Lower-triangular factor of the permuted matrix.
  const CsrMatrix& factor() const noexcept { return l_; }
  /// Solves M x = b.
  Vector solve(std::span<const double> b) const;

 private:
  Permutation perm_;
  CsrMatrix l_;
  CsrMatrix lt_;
};

SparseCholesky sparse_cholesky(const CsrMatrix& m, Permutation perm);
/// Uses amd_ordering(m).
SparseCholesky sparse_cholesky(const CsrMatrix& m);

/// Exact LU without pivoting of P M P^T, computed by no-fill elimination on
/// the symbolic Cholesky pattern of P (M + M^T) P^T, which is closed under
/// fill. Well defined when every leading principal minor is nonzero, e.g.
/// when M + M^T is positive definite.
class SparseLu {
 public:
  SparseLu(const CsrMatrix& m, Permutation perm);

  std::size_t size() const noexcept { return l_.rows(); }
  const Permutation& perm() const noexcept { return perm_; }
  const CsrMatrix& lower() const noexcept { return l_; }
  const CsrMatrix& upper() const noexcept { return u_; }
  Vector solve(std::span<const double> b) const;

 private:
  Permutation perm_;
  CsrMatrix l_;
  CsrMatrix u_;
};

SparseLu sparse_lu(const CsrMatrix& m, Permutation perm);
SparseLu sparse_lu(const CsrMatrix& m);

// ---------------------------------------------------------------------------

enum class IncompleteKind { IC0, ILU0 };

/// No-fill incomplete factorization. For IC0 the upper factor is L^T and
/// `ut` is empty; for ILU0 `l` is unit lower triangular with the unit
/// diagonal stored.
struct IncompleteFactor {
  IncompleteKind kind = IncompleteKind::IC0;
  CsrMatrix l;
  std::optional<CsrMatrix> ut;
  double shift_used = 0.0;

  /// Applies (L Ut)^{-1}, or (L L^T)^{-1} for IC0.
  Vector solve(std::span<const double> b) const;
};

inline constexpr std::size_t kDefaultShiftRetries = 12;

/// IC(0) on the lower-triangular pattern of M. On a nonpositive pivot the
/// factorization restarts on M + sI with s = 1e-3 * max|diag| growing by 10x
/// per retry.
IncompleteFactor ic0(const CsrMatrix& m, std::size_t max_shift_retries = kDefaultShiftRetries);

/// ILU(0) on the pattern of M (row-wise IKJ elimination). No shifting.
IncompleteFactor ilu0(const CsrMatrix& m);

}  // namespace lrsplit
