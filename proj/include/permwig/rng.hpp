#pragma once

#include <cstdint>
#include <random>

namespace permwig {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Derives a decorrelated child seed from a master seed and a stream index.
/// Parallel or repeated sampling always goes through this so that results
/// depend only on (master seed, stream index), never on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t s = master ^ (0x9e3779b97f4a7c15ull * (stream + 1));
  std::uint64_t z = splitmix64_next(s);
  return z ^ splitmix64_next(s);
}

inline Rng make_rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  return Rng(splitmix64_next(s));
}

}  // namespace permwig
