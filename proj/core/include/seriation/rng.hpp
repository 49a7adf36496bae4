#pragma once

#include <cstdint>

namespace seriation {

// splitmix64 finalizer; full-avalanche mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based random stream keyed by (seed, tag). Draw i is a pure
// function of (seed, tag, i), so any iteration order and any thread count
// produce identical values. sub() derives an independent child stream.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t tag = 0;

  std::uint64_t bits(std::uint64_t i) const {
    return mix64(mix64(mix64(seed) ^ tag) ^ i);
  }
  // uniform in [0, 1)
  double u01(std::uint64_t i) const {
    return static_cast<double>(bits(i) >> 11) * 0x1.0p-53;
  }
  // uniform integer in [0, bound), bound > 0; Lemire multiply-shift
  std::uint64_t below(std::uint64_t i, std::uint64_t bound) const {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(bits(i)) * bound) >> 64);
  }
  RngStream sub(std::uint64_t child) const {
    return RngStream{seed, mix64(tag ^ mix64(child))};
  }
};

// Purpose tags; one per independent consumer of randomness.
namespace rng_tag {
inline constexpr std::uint64_t latents = 0x11;
inline constexpr std::uint64_t edge_coins = 0x22;
inline constexpr std::uint64_t subsample = 0x33;
inline constexpr std::uint64_t stage_marks = 0x44;
inline constexpr std::uint64_t alpha_scan = 0x55;
inline constexpr std::uint64_t initial_hook = 0x66;
inline constexpr std::uint64_t acceptance = 0x77;
}  // namespace rng_tag

// Canonical index for the unordered pair {i, j}, i != j.
inline std::uint64_t pair_index(std::uint32_t i, std::uint32_t j) {
  if (i > j) { auto t = i; i = j; j = t; }
  return (static_cast<std::uint64_t>(i) << 32) | j;
}

}  // namespace seriation
