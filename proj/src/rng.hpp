#ifndef RAUZY_RNG_HPP
#define RAUZY_RNG_HPP

#include <cstdint>
#include <random>

namespace rauzy {

using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Seed of the index-th child of a node seeded with `parent`. Pure function of
// its arguments, so any subtree can be regenerated (or sharded) independently.
constexpr std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t index) {
  return splitmix64(parent ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

// 53-bit uniform double in [0, 1). Avoids std::uniform_real_distribution so
// streams are identical across standard library implementations.
constexpr double unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double uniform01(Rng& rng) { return unit_double(rng()); }

inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

}  // namespace rauzy

#endif
