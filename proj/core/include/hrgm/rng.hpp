#pragma once

#include <cmath>
#include <cstdint>

namespace hrgm {

// Counter-based generator: the SplitMix64 finalizer evaluated at equally
// spaced counter positions. A 64-bit stream id is folded into the key so
// independent substreams can be derived from one seed without coordination.
// Outputs are bit-for-bit reproducible for a given (seed, stream) pair.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(fmix(seed + 0x9E3779B97F4A7C15ull * (stream + 1)) ^ fmix(stream + 0x1ull)) {}

  std::uint64_t next_u64() { return fmix(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; the pair is cached so consumption order
  // stays deterministic.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    // Guard against log(0).
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  // Exponential with unit rate.
  double exponential() { return -std::log1p(-uniform()); }

  // Uniform integer in [0, n), n >= 1.
  std::uint64_t below(std::uint64_t n) {
    // Multiply-shift; bias is O(n / 2^64), negligible at desk scale.
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  static std::uint64_t fmix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hrgm
