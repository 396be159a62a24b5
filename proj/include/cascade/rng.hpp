#pragma once

#include <cstdint>

namespace cascade {

// Small splittable counter-mixing generator: per-stream state derived by
// hashing (seed, stream index), so path-level streams are independent of
// scheduling and thread count.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  // Avalanche finalizer; bijective on 64-bit words.
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Stream starting states are full hashes of (seed, index); otherwise the
  // per-path state progressions share the additive stride and can overlap,
  // which correlates paths.
  static SplitMix64 stream(std::uint64_t seed, std::uint64_t index) {
    const std::uint64_t a = mix(seed + 0x9e3779b97f4a7c15ULL);
    const std::uint64_t b = mix(index + 0xbf58476d1ce4e5b9ULL);
    return SplitMix64(mix(a ^ (b * 0x94d049bb133111ebULL + 0x2545f4914f6cdd1dULL)));
  }

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix(state_);
  }

  // Uniform in (0, 1), never exactly 0 or 1.
  double uniform() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

  double normal();  // inverse-CDF transform

 private:
  std::uint64_t state_;
};

// Inverse of the standard normal CDF, accurate to full double precision.
double inverse_normal_cdf(double p);

}  // namespace cascade
