#pragma once

// Counter-based random numbers.
//
// Draw number c of stream s under seed k is a pure function of (k, s, c):
//
//   key    = mix(mix(k) ^ mix(s + 0x632BE59BD9B4E019))
//   bits_c = mix(key ^ mix(c + 1))
//
// where mix is the SplitMix64 finalizer (add the golden gamma, then the
// 30/27/31 xor-shift-multiply rounds). Any entry can be generated
// independently, so parallel fills are reproducible for any thread count.

#include <cmath>
#include <cstdint>
#include <numbers>

namespace dal {

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(mix(mix(seed) ^ mix(stream + 0x632BE59BD9B4E019ULL))) {}

  static constexpr std::uint64_t mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t bits(std::uint64_t counter) const { return mix(key_ ^ mix(counter + 1)); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
  }

  /// Integer in [0, bound) by multiply-high; bias is at most bound / 2^64.
  std::uint64_t below(std::uint64_t counter, std::uint64_t bound) const {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(bits(counter)) * bound) >> 64);
  }

  /// Standard normal variate number i, from counters 2i and 2i+1 (Box-Muller, cosine branch).
  double normal(std::uint64_t i) const {
    const double u1 = 1.0 - uniform(2 * i);  // (0, 1]
    const double u2 = uniform(2 * i + 1);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t key_;
};

/// Stream ids used by the problem generator.
namespace rng_stream {
inline constexpr std::uint64_t kDesign = 0;
inline constexpr std::uint64_t kCoefficients = 1;
inline constexpr std::uint64_t kNoise = 2;
inline constexpr std::uint64_t kInitialPoint = 3;
}  // namespace rng_stream

}  // namespace dal
