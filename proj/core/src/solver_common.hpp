#pragma once

#include <chrono>

#include "lrsplit/errors.hpp"
#include "lrsplit/krylov.hpp"

namespace lrsplit::detail {

inline void check_options(const SolveOptions& opts, std::size_t n) {
  if (!(opts.tol > 0.0)) throw InvalidArgument("solver: tol must be positive");
  if (opts.restart < 1) throw InvalidArgument("solver: restart must be at least 1");
  if (!(opts.beta > 0.0 && opts.beta <= 1.0)) throw InvalidArgument("solver: beta must lie in (0, 1]");
  if (opts.x0 && opts.x0->size() != n) throw DimensionError("solver: x0 length mismatch");
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace lrsplit::detail
