#pragma once

#include <cstdint>
#include <random>

namespace ftlsin {

// splitmix64 finalizer; used as the seed-derivation mix everywhere so that
// parallel and serial runs draw from the same per-task streams.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Stream seed for sub-task (a, b) of a master seed. Documented derivation:
// mix64(master ^ mix64(a * 2 + 1) ^ mix64(b * 2 + 2)).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0) {
  return mix64(master ^ mix64(a * 2 + 1) ^ mix64(b * 2 + 2));
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

// Uniform double in [0, 1); 53-bit resolution, identical across platforms
// for a given engine state.
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection; avoids the implementation-defined
// sequences of std::uniform_int_distribution.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace ftlsin
