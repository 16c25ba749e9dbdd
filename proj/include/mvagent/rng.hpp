#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace mvagent {

// std::mt19937_64 output is fixed by the standard, but the std distributions
// are not; these helpers keep sampled streams identical across toolchains.
using Rng = std::mt19937_64;

// Uniform integer in [0, bound). Requires bound > 0.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  const std::uint64_t limit = Rng::max() - Rng::max() % bound;
  std::uint64_t x = rng();
  while (x >= limit) x = rng();
  return x % bound;
}

// Uniform real in [0, 1) with 53 random bits.
inline double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline bool bernoulli(Rng& rng, double p) { return uniform_unit(rng) < p; }

// Stable 64-bit FNV-1a, used to derive per-record streams from a base seed.
inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline Rng derived_rng(std::uint64_t seed, std::string_view key) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(fnv1a(key)), static_cast<std::uint32_t>(fnv1a(key) >> 32)};
  return Rng(seq);
}

}  // namespace mvagent
