#pragma once

#include <cstddef>
#include <span>
#include <variant>

#include "lrsplit/dense.hpp"
#include "lrsplit/sparse.hpp"

namespace lrsplit {

/// The n-by-k factor U of the low-rank term, stored sparse or dense.
using TallMatrix = std::variant<CsrMatrix, DenseMatrix>;

std::size_t rows(const TallMatrix& u);
std::size_t cols(const TallMatrix& u);
bool is_sparse(const TallMatrix& u);

/// U x or U^T x, dispatching on the storage.
Vector tall_apply(const TallMatrix& u, std::span<const double> x, Trans trans = Trans::No);

DenseMatrix to_dense(const TallMatrix& u);
TallMatrix scaled(const TallMatrix& u, double s);
/// diag(d) * U
TallMatrix row_scaled(const TallMatrix& u, std::span<const double> d);
/// U * diag(d)
TallMatrix col_scaled(const TallMatrix& u, std::span<const double> d);
/// Squared 2-norms of the rows of U.
Vector row_norms_squared(const TallMatrix& u);
/// U^T U, sparse when U is sparse.
std::variant<CsrMatrix, DenseMatrix> gram(const TallMatrix& u);

}  // namespace lrsplit
