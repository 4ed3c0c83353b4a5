#include <algorithm>
#include <cmath>
#include <limits>

#include "lrsplit/errors.hpp"
#include "lrsplit/factor.hpp"

namespace lrsplit {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

struct Ic0Attempt {
  bool ok = true;
  std::size_t failed_row = 0;
};

// In-place IC(0) on the lower triangle `vals` (pattern given by `lower`).
// The diagonal is the last entry of every row.
Ic0Attempt ic0_attempt(const CsrMatrix& lower, std::vector<double>& vals) {
  const std::size_t n = lower.rows();
  const auto off = lower.row_offsets();
  const auto col = lower.col_indices();
  std::vector<std::size_t> pos(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t begin = off[i];
    const std::size_t diag = off[i + 1] - 1;
    for (std::size_t p = begin; p <= diag; ++p) pos[col[p]] = p;
    for (std::size_t p = begin; p < diag; ++p) {
      const std::size_t j = col[p];
      double s = vals[p];
      for (std::size_t q = off[j]; q + 1 < off[j + 1]; ++q) {
        const std::size_t at = pos[col[q]];
        if (at != kNone) s -= vals[at] * vals[q];
      }
      vals[p] = s / vals[off[j + 1] - 1];
    }
    double d = vals[diag];
    for (std::size_t p = begin; p < diag; ++p) d -= vals[p] * vals[p];
    for (std::size_t p = begin; p <= diag; ++p) pos[col[p]] = kNone;
    if (!(d > 0.0) || !std::isfinite(d)) return {false, i};
    vals[diag] = std::sqrt(d);
  }
  return {};
}

}  // namespace

Vector IncompleteFactor::solve(std::span<const double> b) const {
  if (kind == IncompleteKind::IC0) return solve_lower_transposed(l, solve_lower(l, b));
  return solve_upper(*ut, solve_lower(l, b));
}

IncompleteFactor ic0(const CsrMatrix& m, std::size_t max_shift_retries) {
  if (m.rows() != m.cols()) throw DimensionError("ic0: matrix is not square");
  if (!m.is_symmetric(1e-12)) throw InvalidArgument("ic0: matrix is not symmetric");
  const Vector diag = m.diagonal_values();
  double max_diag = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    if (!(diag[i] > 0.0)) throw InvalidArgument("ic0: diagonal entry " + std::to_string(i) + " is not positive");
    max_diag = std::max(max_diag, diag[i]);
  }

  const CsrMatrix lower = m.lower_triangle();
  const auto off = lower.row_offsets();
  std::size_t failed = 0;
  double shift = 0.0;
  for (std::size_t attempt = 0; attempt <= max_shift_retries; ++attempt) {
    if (attempt > 0) shift = 1e-3 * max_diag * std::pow(10.0, static_cast<double>(attempt - 1));
    std::vector<double> vals(lower.values().begin(), lower.values().end());
    for (std::size_t i = 0; i < lower.rows(); ++i) vals[off[i + 1] - 1] += shift;
    const Ic0Attempt r = ic0_attempt(lower, vals);
    if (r.ok) {
      IncompleteFactor f;
      f.kind = IncompleteKind::IC0;
      f.l = CsrMatrix(lower.rows(), lower.cols(),
                      std::vector<std::size_t>(off.begin(), off.end()),
                      std::vector<std::size_t>(lower.col_indices().begin(), lower.col_indices().end()),
                      std::move(vals));
      f.shift_used = shift;
      return f;
    }
    failed = r.failed_row;
  }
  throw NotPositiveDefinite("ic0: breakdown persists after " + std::to_string(max_shift_retries) +
                                " shift retries",
                            failed);
}

IncompleteFactor ilu0(const CsrMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("ilu0: matrix is not square");
  const std::size_t n = m.rows();
  const auto off = m.row_offsets();
  const auto col = m.col_indices();
  std::vector<double> vals(m.values().begin(), m.values().end());

  std::vector<std::size_t> diag_pos(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = off[i]; p < off[i + 1]; ++p) {
      if (col[p] == i) diag_pos[i] = p;
    }
    if (diag_pos[i] == kNone) throw FactorizationError("ilu0: missing diagonal entry", i);
  }

  std::vector<std::size_t> pos(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = off[i]; p < off[i + 1]; ++p) pos[col[p]] = p;
    for (std::size_t p = off[i]; p < diag_pos[i]; ++p) {
      const std::size_t k = col[p];
      vals[p] /= vals[diag_pos[k]];
      const double lik = vals[p];
      for (std::size_t q = diag_pos[k] + 1; q < off[k + 1]; ++q) {
        const std::size_t at = pos[col[q]];
        if (at != kNone) vals[at] -= lik * vals[q];
      }
    }
    for (std::size_t p = off[i]; p < off[i + 1]; ++p) pos[col[p]] = kNone;
    const double d = vals[diag_pos[i]];
    if (d == 0.0 || !std::isfinite(d)) throw FactorizationError("ilu0: zero pivot", i);
  }

  std::vector<std::size_t> loff{0}, lcol, uoff{0}, ucol;
  std::vector<double> lval, uval;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t p = off[i]; p < diag_pos[i]; ++p) {
      lcol.push_back(col[p]);
      lval.push_back(vals[p]);
    }
    lcol.push_back(i);
    lval.push_back(1.0);
    loff.push_back(lcol.size());
    for (std::size_t p = diag_pos[i]; p < off[i + 1]; ++p) {
      ucol.push_back(col[p]);
      uval.push_back(vals[p]);
    }
    uoff.push_back(ucol.size());
  }
  IncompleteFactor f;
  f.kind = IncompleteKind::ILU0;
  f.l = CsrMatrix(n, n, std::move(loff), std::move(lcol), std::move(lval));
  f.ut = CsrMatrix(n, n, std::move(uoff), std::move(ucol), std::move(uval));
  return f;
}

}  // namespace lrsplit
