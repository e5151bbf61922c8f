#pragma once

#include <cmath>
#include <cstdint>

namespace qclust {

// SplitMix64 (Steele, Lea & Flood). Project-wide generator: the output is a
// pure function of the 64-bit state, so identical seeds give identical
// streams on every platform. Independent substreams are derived by hashing
// (seed, stream_id), never by sharing state.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), built from the top 53 bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform integer in [0, n).
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

  // Independent stream for a named purpose, decorrelated from the parent seed.
  static SplitMix64 split(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 mix(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    return SplitMix64(mix.next_u64());
  }

 private:
  std::uint64_t state_;
};

// Standard normal deviates via the Box-Muller transform. Each transform
// yields a pair; the second value is cached so draw order is well defined.
class GaussianSampler {
 public:
  explicit GaussianSampler(SplitMix64 rng) : rng_(rng) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = rng_.next_double();
    const double u2 = rng_.next_double();
    if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  SplitMix64 rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qclust
