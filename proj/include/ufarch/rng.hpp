#pragma once

#include <cmath>
#include <cstdint>

namespace ufarch::rng {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so trials can be evaluated in any order and on any
// worker without shared state.

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Key for one (seed, stream) pair; streams are usually trial indices.
constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t stream) {
  return mix64(mix64(seed + kGolden) ^ (stream * 0xd6e8feb86659fd93ULL + kGolden));
}

constexpr std::uint64_t word(std::uint64_t key, std::uint64_t counter) {
  return mix64(key + (counter + 1) * kGolden);
}

/// Integer threshold t with P(word < t) == p for uniform 64-bit words.
inline std::uint64_t bernoulli_threshold(double p) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return ~std::uint64_t{0};
  return static_cast<std::uint64_t>(std::ldexp(p, 64));
}

inline double uniform01(std::uint64_t w) {
  return static_cast<double>(w >> 11) * 0x1.0p-53;
}

}  // namespace ufarch::rng
