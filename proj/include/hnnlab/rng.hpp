#pragma once

#include <cstdint>
#include <random>

namespace hnnlab {

/// Seed used by every command that takes --seed when none is given.
inline constexpr std::uint64_t kDefaultSeed = 20150601;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

using Rng = std::mt19937_64;

/// Independent generator for stream `index` of experiment `master`. Streams
/// depend only on (master, index), so trial order and threading do not
/// affect results.
inline Rng derive_stream(std::uint64_t master, std::uint64_t index) {
  return Rng(splitmix64(splitmix64(master) ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

inline Rng derive_stream(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
  return derive_stream(splitmix64(master ^ splitmix64(a)), b);
}

/// Uniform draw from [0, n). Rejection on the raw 64-bit output keeps the
/// result identical across standard library implementations.
inline std::uint64_t uniform_below(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = n * (UINT64_MAX / n);
  for (;;) {
    std::uint64_t x = rng();
    if (x < limit) return x % n;
  }
}

}  // namespace hnnlab
