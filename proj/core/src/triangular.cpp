#include <cmath>

#include "lrsplit/errors.hpp"
#include "lrsplit/factor.hpp"

namespace lrsplit {

namespace {

void check_square(const CsrMatrix& t, std::span<const double> b, const char* who) {
  if (t.rows() != t.cols() || b.size() != t.rows()) {
    throw DimensionError(std::string(who) + ": dimension mismatch");
  }
}

double diagonal_or_throw(const CsrMatrix& t, std::size_t i, bool last) {
  const auto cols = t.row_cols(i);
  const auto vals = t.row_values(i);
  if (cols.empty()) throw FactorizationError("zero diagonal in triangular factor", i);
  const std::size_t p = last ? cols.size() - 1 : 0;
  if (cols[p] != i || vals[p] == 0.0) {
    throw FactorizationError("zero diagonal in triangular factor", i);
  }
  return vals[p];
}

}  // namespace

Vector solve_lower(const CsrMatrix& l, std::span<const double> b) {
  check_square(l, b, "solve_lower");
  Vector x(b.begin(), b.end());
  for (std::size_t i = 0; i < l.rows(); ++i) {
    const auto cols = l.row_cols(i);
    const auto vals = l.row_values(i);
    const double d = diagonal_or_throw(l, i, true);
    double s = x[i];
    for (std::size_t p = 0; p + 1 < cols.size(); ++p) s -= vals[p] * x[cols[p]];
    x[i] = s / d;
  }
  return x;
}

Vector solve_lower_transposed(const CsrMatrix& l, std::span<const double> b) {
  check_square(l, b, "solve_lower_transposed");
  Vector x(b.begin(), b.end());
  for (std::size_t i = l.rows(); i-- > 0;) {
    const auto cols = l.row_cols(i);
    const auto vals = l.row_values(i);
    const double d = diagonal_or_throw(l, i, true);
    x[i] /= d;
    const double xi = x[i];
    for (std::size_t p = 0; p + 1 < cols.size(); ++p) x[cols[p]] -= vals[p] * xi;
  }
  return x;
}

Vector solve_upper(const CsrMatrix& u, std::span<const double> b) {
  check_square(u, b, "solve_upper");
  Vector x(b.begin(), b.end());
  for (std::size_t i = u.rows(); i-- > 0;) {
    const auto cols = u.row_cols(i);
    const auto vals = u.row_values(i);
    const double d = diagonal_or_throw(u, i, false);
    double s = x[i];
    for (std::size_t p = 1; p < cols.size(); ++p) s -= vals[p] * x[cols[p]];
    x[i] = s / d;
  }
  return x;
}

}  // namespace lrsplit
