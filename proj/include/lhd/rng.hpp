#pragma once

#include <cstdint>
#include <random>

namespace lhd {

/// All randomness in the library flows through this engine. mt19937_64 has a
/// fully specified output sequence, and the bounded draws below avoid
/// std::uniform_int_distribution, whose mapping is implementation-defined, so
/// seeded results are reproducible across standard libraries.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

/// Seed for run `index` within a batch keyed by `base_seed`. Independent of
/// the order runs are executed in.
inline std::uint64_t derive_run_seed(std::uint64_t base_seed, std::uint64_t index) {
  return base_seed ^ splitmix64(index);
}

/// Unbiased draw from [0, bound) by rejection.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t x = rng();
    if (x >= threshold) return x % bound;
  }
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace lhd
