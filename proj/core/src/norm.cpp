#include "lrsplit/norm.hpp"

#include <cmath>
#include <limits>

#include "lrsplit/rng.hpp"

namespace lrsplit {

namespace {
constexpr std::uint64_t kStartSeed = 0x6c72732d6e6f726dULL;
}

NormEstimate two_norm_estimate(std::size_t rows, std::size_t cols, const LinearMap& apply,
                               const LinearMap& apply_t, double tol, std::size_t maxit) {
  (void)rows;
  NormEstimate out;
  if (cols == 0) {
    out.converged = true;
    return out;
  }
  Rng rng(kStartSeed);
  Vector x(cols);
  for (double& v : x) v = rng.normal();
  scale(1.0 / norm2(x), x);

  double prev = 0.0;
  double prev_change = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= maxit; ++it) {
    const Vector y = apply(x);
    const double est = norm2(y);
    out.iterations = it;
    if (est > out.value) out.value = est;
    if (est == 0.0) {
      out.converged = true;
      return out;
    }
    Vector z = apply_t(y);
    const double zn = norm2(z);
    if (zn == 0.0) {
      out.converged = true;
      return out;
    }
    scale(1.0 / zn, z);
    x = std::move(z);

    const double change = std::abs(est - prev) / est;
    prev = est;
    if (it >= 3) {
      if (change == 0.0) {
        out.converged = true;
        return out;
      }
      const double ratio = prev_change > 0.0 ? change / prev_change : 1.0;
      if (ratio < 1.0 && change <= tol) {
        const double err = change * ratio / (1.0 - ratio);
        if (err <= tol) {
          out.converged = true;
          return out;
        }
      }
    }
    prev_change = change;
  }
  return out;
}

NormEstimate two_norm_estimate(const CsrMatrix& m, double tol, std::size_t maxit) {
  return two_norm_estimate(
      m.rows(), m.cols(), [&](std::span<const double> v) { return spmv(m, v); },
      [&](std::span<const double> v) { return spmv(m, v, Trans::Yes); }, tol, maxit);
}

NormEstimate two_norm_estimate(const TallMatrix& m, double tol, std::size_t maxit) {
  return two_norm_estimate(
      rows(m), cols(m), [&](std::span<const double> v) { return tall_apply(m, v); },
      [&](std::span<const double> v) { return tall_apply(m, v, Trans::Yes); }, tol, maxit);
}

}  // namespace lrsplit
