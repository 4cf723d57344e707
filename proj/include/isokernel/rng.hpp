#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "isokernel/types.hpp"

namespace isokernel {

// SplitMix64 finalizer; spreads raw seeds and derives substream seeds.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Deterministic random source. Every draw is defined purely in terms of the
// mt19937_64 bit stream, so sequences are reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  // Independent stream `index` of a base seed. Substreams may be consumed in
  // any order (or in parallel) without affecting each other.
  static Rng substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix64(seed) ^ mix64(index + 1));
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Unbiased integer in [0, n); rejection sampling.
  Index uniform_index(Index n) {
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t rem =
        (std::numeric_limits<std::uint64_t>::max() % un + 1) % un;
    std::uint64_t v = next_u64();
    if (rem != 0) {
      const std::uint64_t limit = std::uint64_t{0} - rem;
      while (v >= limit) v = next_u64();
    }
    return static_cast<Index>(v % un);
  }

  // Standard normal via Box-Muller; one value per call.
  double normal() {
    const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

// First k entries of a partial Fisher-Yates shuffle of 0..n-1.
inline std::vector<Index> sample_without_replacement(Index n, Index k, Rng& rng) {
  std::vector<Index> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), Index{0});
  for (Index j = 0; j < k; ++j) {
    const Index r = j + rng.uniform_index(n - j);
    std::swap(idx[static_cast<std::size_t>(j)], idx[static_cast<std::size_t>(r)]);
  }
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

}  // namespace isokernel
