#pragma once

#include <cstdint>
#include <random>

// Seed-derivation helpers. Every stochastic component draws from an
// mt19937_64 whose seed is derived by hashing (master seed, stream tag,
// index), so sharded work reproduces bit-for-bit at any thread count.

namespace qkdlink::detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag,
                                 std::uint64_t index = 0) {
  return splitmix64(splitmix64(seed ^ 0x51ed270b8a1c6d3fULL) ^
                    splitmix64(tag * 0x2545f4914f6cdd1dULL + index));
}

inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t tag,
                                   std::uint64_t index = 0) {
  return std::mt19937_64(derive_seed(seed, tag, index));
}

// Stream tags, one per independent consumer.
enum StreamTag : std::uint64_t {
  kPatternStream = 1,
  kDetectionStream = 2,
  kHandMotionStream = 3,
  kPsdNoiseStream = 4,
  kOptimizerStream = 5,
  kScenarioStream = 6,
};

}  // namespace qkdlink::detail
