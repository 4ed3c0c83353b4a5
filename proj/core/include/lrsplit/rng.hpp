#pragma once

#include <cstdint>

namespace lrsplit {

/// SplitMix64 used as a counter-based generator: the i-th draw is
/// mix(seed + (i+1) * 0x9E3779B97F4A7C15). Output is a pure function of
/// (seed, counter), so every generated instance is bit-reproducible across
/// platforms. Normals use the polar-free Box-Muller transform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace lrsplit
