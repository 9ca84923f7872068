#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace windward::detail {

// All randomness in the library flows through these helpers on top of
// std::mt19937_64. The engine's output sequence is pinned by the C++
// standard, and the value mappings below are spelled out here rather than
// delegated to std::*_distribution (whose sequences are implementation
// defined), so a seed reproduces identical streams on every platform.

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent sub-seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Uniform draw in [0, 1) using the top 53 bits of one engine output.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform draw in [lo, hi).
inline double uniform(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

/// Standard normal draw via Box-Muller; consumes exactly two engine outputs.
inline double gaussian(Rng& rng) {
  double u1 = uniform01(rng);
  double u2 = uniform01(rng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace windward::detail
