#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "lrsplit/sparse.hpp"
#include "lrsplit/tall.hpp"

namespace lrsplit {

struct NormEstimate {
  double value = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

inline constexpr double kNormTol = 1e-6;
inline constexpr std::size_t kNormMaxit = 500;

/// Power iteration on M^T M from a fixed seeded start vector.
///
/// The iteration stops once the extrapolated error of the estimate,
/// delta * r / (1 - r) with delta the relative change and r the observed
/// contraction of successive changes, drops below `tol`. When `maxit` is
/// exhausted the best estimate is returned with `converged == false`.
NormEstimate two_norm_estimate(const CsrMatrix& m, double tol = kNormTol,
                               std::size_t maxit = kNormMaxit);
NormEstimate two_norm_estimate(const TallMatrix& m, double tol = kNormTol,
                               std::size_t maxit = kNormMaxit);

using LinearMap = std::function<Vector(std::span<const double>)>;

/// Matrix-free variant; `apply` maps R^cols -> R^rows, `apply_t` the reverse.
NormEstimate two_norm_estimate(std::size_t rows, std::size_t cols, const LinearMap& apply,
                               const LinearMap& apply_t, double tol = kNormTol,
                               std::size_t maxit = kNormMaxit);

}  // namespace lrsplit
