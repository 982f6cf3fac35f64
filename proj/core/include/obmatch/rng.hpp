#pragma once

#include <cstdint>
#include <random>
#include <vector>

// Deterministic sampling helpers on top of std::mt19937_64.
//
// The engine itself is pinned by the standard, but std::uniform_*_distribution
// is implementation-defined, so seeded outputs would not be stable across
// toolchains. Everything here maps raw engine draws to values explicitly.

namespace obmatch {

/// splitmix64 step; used to derive independent stream seeds from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Uniform double in [0, 1): top 53 bits of one engine draw.
inline double uniform_unit(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Uniform double in (0, 1]; never returns 0.
inline double uniform_unit_positive(std::mt19937_64& gen) {
  return static_cast<double>((gen() >> 11) + 1) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_real(std::mt19937_64& gen, double lo, double hi) {
  return lo + uniform_unit(gen) * (hi - lo);
}

/// Unbiased uniform integer in [0, n) via masked rejection. n must be > 0.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t n) {
  if (n <= 1) return 0;
  std::uint64_t mask = ~0ULL;
  const std::uint64_t limit = n - 1;
  for (int shift = 32; shift > 0; shift /= 2) {
    if ((mask >> shift) >= limit) mask >>= shift;
  }
  std::uint64_t draw = gen() & mask;
  while (draw >= n) draw = gen() & mask;
  return draw;
}

/// In-place Fisher-Yates shuffle.
template <typename T>
void shuffle(std::vector<T>& v, std::mt19937_64& gen) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(uniform_below(gen, i));
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace obmatch
