#include <algorithm>
#include <cmath>

#include "lrsplit/errors.hpp"
#include "lrsplit/factor.hpp"
#include "lrsplit/ordering.hpp"

namespace lrsplit {

namespace {

void require_square(const CsrMatrix& m, const char* who) {
  if (m.rows() != m.cols()) throw DimensionError(std::string(who) + ": matrix is not square");
}

// Pattern of row k of L (strictly lower part) in topological order, written
// to s[top..n). `lower` holds the lower triangle by rows.
std::size_t ereach(const CsrMatrix& lower, std::size_t k, const std::vector<std::size_t>& parent,
                   std::vector<std::size_t>& mark, std::vector<std::size_t>& s,
                   std::vector<std::size_t>& stack) {
  const std::size_t n = lower.rows();
  std::size_t top = n;
  mark[k] = k;
  for (std::size_t j : lower.row_cols(k)) {
    if (j >= k) continue;
    std::size_t len = 0;
    for (std::size_t i = j; mark[i] != k; i = parent[i]) {
      stack[len++] = i;
      mark[i] = k;
    }
    while (len > 0) s[--top] = stack[--len];
  }
  return top;
}

std::vector<std::size_t> etree_of_lower(const CsrMatrix& lower) {
  const std::size_t n = lower.rows();
  std::vector<std::size_t> parent(n, n);
  std::vector<std::size_t> ancestor(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t j : lower.row_cols(k)) {
      if (j >= k) continue;
      std::size_t i = j;
      while (i != n && i < k) {
        const std::size_t next = ancestor[i];
        ancestor[i] = k;
        if (next == n) {
          parent[i] = k;
          break;
        }
        i = next;
      }
    }
  }
  return parent;
}

CsrMatrix symmetric_lower(const CsrMatrix& m) { return m.symmetric_pattern().lower_triangle(); }

Vector gather(std::span<const double> b, const Permutation& perm) {
  Vector out(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[i] = b[perm[i]];
  return out;
}

Vector scatter(std::span<const double> z, const Permutation& perm) {
  Vector out(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out[perm[i]] = z[i];
  return out;
}

void check_perm(const Permutation& perm, std::size_t n, const char* who) {
  if (!is_permutation(perm, n)) throw InvalidArgument(std::string(who) + ": invalid permutation");
}

}  // namespace

std::vector<std::size_t> elimination_tree(const CsrMatrix& m) {
  require_square(m, "elimination_tree");
  return etree_of_lower(symmetric_lower(m));
}

CsrMatrix cholesky_fill_pattern(const CsrMatrix& m) {
  require_square(m, "cholesky_fill_pattern");
  const std::size_t n = m.rows();
  const CsrMatrix lower = symmetric_lower(m);
  const auto parent = etree_of_lower(lower);
  std::vector<std::size_t> mark(n, n), s(n), stack(n);
  std::vector<std::size_t> offsets{0};
  std::vector<std::size_t> cols;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t top = ereach(lower, k, parent, mark, s, stack);
    const std::size_t start = cols.size();
    cols.insert(cols.end(), s.begin() + static_cast<std::ptrdiff_t>(top), s.end());
    std::sort(cols.begin() + static_cast<std::ptrdiff_t>(start), cols.end());
    cols.push_back(k);
    offsets.push_back(cols.size());
  }
  std::vector<double> values(cols.size(), 1.0);
  return CsrMatrix(n, n, std::move(offsets), std::move(cols), std::move(values));
}

SparseCholesky::SparseCholesky(const CsrMatrix& m, Permutation perm) : perm_(std::move(perm)) {
  require_square(m, "sparse_cholesky");
  const std::size_t n = m.rows();
  check_perm(perm_, n, "sparse_cholesky");
  if (!m.is_symmetric(1e-12)) throw InvalidArgument("sparse_cholesky: matrix is not symmetric");

  const CsrMatrix lower = m.permuted(perm_).lower_triangle();
  const auto parent = etree_of_lower(lower);

  std::vector<std::size_t> mark(n, n), s(n), stack(n);
  std::vector<std::size_t> counts(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t top = ereach(lower, k, parent, mark, s, stack);
    for (std::size_t p = top; p < n; ++p) ++counts[s[p]];
  }
  std::vector<std::size_t> colptr(n + 1, 0);
  for (std::size_t j = 0; j < n; ++j) colptr[j + 1] = colptr[j] + counts[j];
  std::vector<std::size_t> rows(colptr[n]);
  std::vector<double> vals(colptr[n]);
  std::vector<std::size_t> next(n);
  for (std::size_t j = 0; j < n; ++j) next[j] = colptr[j] + 1;

  std::fill(mark.begin(), mark.end(), n);
  Vector x(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t top = ereach(lower, k, parent, mark, s, stack);
    const auto cols = lower.row_cols(k);
    const auto v = lower.row_values(k);
    for (std::size_t p = 0; p < cols.size(); ++p) x[cols[p]] = v[p];
    double d = x[k];
    x[k] = 0.0;
    for (std::size_t t = top; t < n; ++t) {
      const std::size_t j = s[t];
      const double lkj = x[j] / vals[colptr[j]];
      x[j] = 0.0;
      for (std::size_t p = colptr[j] + 1; p < next[j]; ++p) x[rows[p]] -= vals[p] * lkj;
      d -= lkj * lkj;
      rows[next[j]] = k;
      vals[next[j]++] = lkj;
    }
    if (!(d > 0.0) || !std::isfinite(d)) {
      throw NotPositiveDefinite("sparse_cholesky: matrix is not positive definite", k);
    }
    rows[colptr[k]] = k;
    vals[colptr[k]] = std::sqrt(d);
  }
  lt_ = CsrMatrix(n, n, std::move(colptr), std::move(rows), std::move(vals));
  l_ = lt_.transposed();
}

Vector SparseCholesky::solve(std::span<const double> b) const {
  if (b.size() != size()) throw DimensionError("SparseCholesky::solve: dimension mismatch");
  const Vector y = lrsplit::solve_lower(l_, gather(b, perm_));
  return scatter(solve_upper(lt_, y), perm_);
}

SparseCholesky sparse_cholesky(const CsrMatrix& m, Permutation perm) {
  return SparseCholesky(m, std::move(perm));
}

SparseCholesky sparse_cholesky(const CsrMatrix& m) {
  require_square(m, "sparse_cholesky");
  return SparseCholesky(m, amd_ordering(m));
}

SparseLu::SparseLu(const CsrMatrix& m, Permutation perm) : perm_(std::move(perm)) {
  require_square(m, "sparse_lu");
  const std::size_t n = m.rows();
  check_perm(perm_, n, "sparse_lu");
  const CsrMatrix c = m.permuted(perm_);
  const CsrMatrix fill = cholesky_fill_pattern(c);
  const CsrMatrix full = add(fill, fill.transposed());

  // Embed the values of c in the closed pattern.
  std::vector<std::size_t> offsets(full.row_offsets().begin(), full.row_offsets().end());
  std::vector<std::size_t> cols(full.col_indices().begin(), full.col_indices().end());
  std::vector<double> values(cols.size(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto ccols = c.row_cols(i);
    const auto cvals = c.row_values(i);
    std::size_t q = offsets[i];
    for (std::size_t p = 0; p < ccols.size(); ++p) {
      while (cols[q] < ccols[p]) ++q;
      values[q] = cvals[p];
    }
  }
  IncompleteFactor f = ilu0(CsrMatrix(n, n, std::move(offsets), std::move(cols), std::move(values)));
  l_ = std::move(f.l);
  u_ = std::move(*f.ut);
}

Vector SparseLu::solve(std::span<const double> b) const {
  if (b.size() != size()) throw DimensionError("SparseLu::solve: dimension mismatch");
  const Vector y = solve_lower(l_, gather(b, perm_));
  return scatter(solve_upper(u_, y), perm_);
}

SparseLu sparse_lu(const CsrMatrix& m, Permutation perm) { return SparseLu(m, std::move(perm)); }

SparseLu sparse_lu(const CsrMatrix& m) {
  require_square(m, "sparse_lu");
  return SparseLu(m, amd_ordering(m));
}

}  // namespace lrsplit
