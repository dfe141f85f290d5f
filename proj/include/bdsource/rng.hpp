#pragma once

#include <cmath>
#include <cstdint>

#include "bdsource/error.hpp"

namespace bdsource {

// Counter-mode SplitMix64. The i-th value of a stream is a pure function of
// (seed, i), so streams can be split and replayed without carrying generator
// state around. Identical (seed, counter) pairs give identical output on any
// platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  static std::uint64_t value_at(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Derives an independent substream seed, used to split one user-facing seed
  // into per-point or per-setting streams.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    return value_at(seed ^ 0xA24BAED4963EE407ULL, stream);
  }

  std::uint64_t next_u64() { return value_at(seed_, counter_++); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

// Poisson sample with the given mean. Sequential inversion below mean 30,
// Hormann's PTRS transformed rejection above. Only consumes uniforms from
// `rng`, so results are reproducible for a fixed (seed, counter) state.
inline std::int64_t poisson_sample(CounterRng& rng, double mean) {
  if (mean < 0.0 || !std::isfinite(mean)) {
    throw DomainError("poisson_sample: mean must be finite and nonnegative");
  }
  if (mean == 0.0) return 0;

  if (mean < 30.0) {
    // Inversion by sequential search on the CDF.
    const double p0 = std::exp(-mean);
    double p = p0;
    double cdf = p;
    std::int64_t k = 0;
    const double u = rng.next_double();
    while (u > cdf && k < 4096) {
      ++k;
      p *= mean / static_cast<double>(k);
      cdf += p;
    }
    return k;
  }

  // PTRS (Hormann 1993), valid for mean >= 10.
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    double u = rng.next_double() - 0.5;
    double v = rng.next_double();
    const double us = 0.5 - std::fabs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    const double k = kf;
    const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
    const double rhs = k * log_mean - mean - std::lgamma(k + 1.0);
    if (lhs <= rhs) return static_cast<std::int64_t>(kf);
  }
}

}  // namespace bdsource
