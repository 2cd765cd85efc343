// SPDX-License-Identifier: Apache-2.0
//
// beamsim - beamspace entropy analysis for sparse mm-wave MIMO channels

#pragma once

#include <cmath>
#include <cstdint>

namespace beamsim {

/// splitmix64 finalizer (Steele/Lea/Flood; Vigna's fixed-increment variant).
inline std::uint64_t mix64(std::uint64_t z) {
  z += UINT64_C(0x9E3779B97F4A7C15);
  z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
  z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
  return z ^ (z >> 31);
}

/// Minimal splittable counter-style generator. Every Monte Carlo run gets
/// its own stream derived from (master_seed, run_index), so draws never
/// depend on scheduling order or thread count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += UINT64_C(0x9E3779B97F4A7C15));
    z = (z ^ (z >> 30)) * UINT64_C(0xBF58476D1CE4E5B9);
    z = (z ^ (z >> 27)) * UINT64_C(0x94D049BB133111EB);
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1), 53 mantissa bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  /// Box-Muller; two fresh uniforms per call so the draw sequence stays
  /// independent of call interleaving.
  double normal(double mean, double sigma) {
    const double u1 = 1.0 - next_double();  // (0, 1]
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + sigma * r * std::cos(6.283185307179586476925287 * u2);
  }

  double exponential(double mean) {
    const double u = 1.0 - next_double();  // (0, 1]
    return -mean * std::log(u);
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    // 53-bit double path keeps this bit-reproducible and bias is < 2^-53.
    return static_cast<std::uint64_t>(next_double() * static_cast<double>(n)) % n;
  }

 private:
  std::uint64_t state_;
};

/// Stream for run r of an experiment with the given master seed.
inline SplitMix64 substream(std::uint64_t master_seed, std::uint64_t run_index) {
  return SplitMix64(mix64(master_seed ^ mix64(run_index)));
}

}  // namespace beamsim
