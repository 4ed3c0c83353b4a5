#pragma once

#include "lrsplit/sparse.hpp"

namespace lrsplit {

/// Approximate minimum degree ordering of the graph of M + M^T.
///
/// Quotient-graph elimination with approximate external degrees, element
/// absorption and supervariable detection. Ties on degree go to the lowest
/// variable index; a supervariable is emitted as its absorbed members in
/// ascending order followed by its principal (lowest-index) variable.
/// Returns a new-to-old permutation; values of `pattern` are ignored.
Permutation amd_ordering(const CsrMatrix& pattern);

}  // namespace lrsplit
