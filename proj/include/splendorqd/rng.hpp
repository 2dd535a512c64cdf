#pragma once

#include <cstdint>
#include <random>

namespace sqd {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent child seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return mix64(mix64(parent) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

inline int uniform_int(Rng& rng, int lo, int hi_inclusive) {
  return std::uniform_int_distribution<int>(lo, hi_inclusive)(rng);
}

inline double uniform_real(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace sqd
