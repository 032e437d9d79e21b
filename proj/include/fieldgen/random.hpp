#pragma once

#include <cstdint>
#include <random>

#include "fieldgen/so3.hpp"

namespace fieldgen {

/// SplitMix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/**
 * Seed of episode `index` under `master`:
 * splitmix64(master ^ splitmix64(index + 0x9E3779B97F4A7C15)).
 */
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

/**
 * Platform-stable random source.
 *
 * std::mt19937_64 output is fully specified by the standard, but the standard
 * distributions are not, so all variates are derived here from raw 64-bit draws.
 */
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller, one variate per call).
  double normal();
  /// Uniform direction on the unit sphere.
  Vec3 unit_vector();

 private:
  std::mt19937_64 engine_;
};

}  // namespace fieldgen
