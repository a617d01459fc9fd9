#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace sse {

/// Deterministic 64-bit random stream (splitmix64 core).
///
/// Every stochastic operation in the library takes one of these explicitly,
/// so runs are reproducible from a single seed. Streams are splittable:
/// split() derives an independent child, and derive() maps a (seed, index)
/// pair to a child seed, which keeps parallel consumers order-independent.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1), 53-bit resolution.
  double next_double() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform integer in [0, bound). bound must be positive; the modulo bias
  /// is below bound / 2^64 and irrelevant for the small bounds used here.
  int next_int(int bound) {
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(bound));
  }

  /// N(mean, sigma^2) via Box-Muller; the paired draw is cached.
  double next_gaussian(double mean, double sigma) {
    if (has_cached_) {
      has_cached_ = false;
      return mean + sigma * cached_;
    }
    double u1 = next_double();
    while (u1 <= 0.0) u1 = next_double();
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    cached_ = r * std::sin(theta);
    has_cached_ = true;
    return mean + sigma * r * std::cos(theta);
  }

  /// Gamma(alpha, 1) via Marsaglia-Tsang; alpha < 1 handled by boosting.
  double next_gamma(double alpha) {
    if (alpha < 1.0) {
      const double u = next_double();
      return next_gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
    }
    const double d = alpha - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x = next_gaussian(0.0, 1.0);
      double v = 1.0 + c * x;
      if (v <= 0.0) continue;
      v = v * v * v;
      const double u = next_double();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  /// Independent child stream; advances this stream by one draw.
  RandomStream split() { return RandomStream(next_u64() ^ 0x3c79ac492ba7b653ULL); }

  /// Deterministic child seed for (seed, index); used to give trials and
  /// planners their own streams independent of execution order.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
    RandomStream r(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
    return r.next_u64();
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace sse
