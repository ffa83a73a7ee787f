#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "crbm/math_util.hpp"

namespace crbm {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic substream seed: hash of the master seed and up to three tags.
inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0,
                            uint64_t c = 0) {
  uint64_t s = splitmix64(master ^ 0x8000000000000000ULL);
  s = splitmix64(s ^ a);
  s = splitmix64(s ^ b);
  s = splitmix64(s ^ c);
  return s;
}

/// Seeded random stream. All samplers are implemented here (rather than via
/// std::*_distribution) so that draws are reproducible across standard
/// libraries for a fixed engine state.
class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  uint64_t raw() { return engine_(); }

  /// Uniform on (0, 1); never returns 0 or 1.
  double uniform() {
    const double u = (engine_() >> 11) * 0x1.0p-53;
    return u == 0.0 ? 0x1.0p-54 : u;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [0, n).
  uint64_t below(uint64_t n) {
    // Lemire-style rejection for an unbiased bounded draw.
    uint64_t x = engine_();
    __uint128_t m = static_cast<__uint128_t>(x) * n;
    uint64_t l = static_cast<uint64_t>(m);
    if (l < n) {
      const uint64_t t = -n % n;
      while (l < t) {
        x = engine_();
        m = static_cast<__uint128_t>(x) * n;
        l = static_cast<uint64_t>(m);
      }
    }
    return static_cast<uint64_t>(m >> 64);
  }

  bool bernoulli(double p) { return uniform() < p; }

  double normal() { return math::norm_ppf(uniform()); }

  double normal(double mu, double sigma) { return mu + sigma * normal(); }

  /// Gamma(shape, scale) via Marsaglia-Tsang squeeze; boosts shape < 1.
  double gamma(double shape, double scale) {
    if (shape < 1.0) {
      const double u = uniform();
      return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) {
        return d * v * scale;
      }
    }
  }

  /// Poisson(lambda); inversion for small means, PTRD rejection otherwise.
  int64_t poisson(double lambda) {
    if (lambda <= 0.0) return 0;
    if (lambda < 12.0) {
      const double l = std::exp(-lambda);
      int64_t k = 0;
      double p = 1.0;
      do {
        ++k;
        p *= uniform();
      } while (p > l);
      return k - 1;
    }
    return poisson_ptrd(lambda);
  }

  /// Draw from normal(mu, sigma) truncated to [0, inf).
  double truncnorm_positive(double mu, double sigma) {
    const double alpha = -mu / sigma;  // standardized lower bound
    if (alpha < 0.3) {
      // Enough mass above the bound: plain rejection.
      for (;;) {
        const double x = normal(mu, sigma);
        if (x >= 0.0) return x;
      }
    }
    // Robert (1995) exponential-proposal rejection in the tail.
    const double a = 0.5 * (alpha + std::sqrt(alpha * alpha + 4.0));
    for (;;) {
      const double z = alpha - std::log(uniform()) / a;
      const double rho = std::exp(-0.5 * (z - a) * (z - a));
      if (uniform() <= rho) return mu + sigma * z;
    }
  }

  /// Index draw from unnormalized non-negative weights.
  int categorical(const double* w, int n) {
    double total = 0.0;
    for (int i = 0; i < n; ++i) total += w[i];
    double u = uniform() * total;
    for (int i = 0; i < n; ++i) {
      u -= w[i];
      if (u <= 0.0) return i;
    }
    return n - 1;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

 private:
  int64_t poisson_ptrd(double lambda) {
    // Hormann (1993), transformed rejection with squeeze (PTRD).
    const double slam = std::sqrt(lambda);
    const double loglam = std::log(lambda);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
      double u = uniform() - 0.5;
      const double v = uniform();
      const double us = 0.5 - std::abs(u);
      const double k = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
      if (us >= 0.07 && v <= vr) return static_cast<int64_t>(k);
      if (k < 0.0 || (us < 0.013 && v > us)) continue;
      if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
          k * loglam - lambda - std::lgamma(k + 1.0)) {
        return static_cast<int64_t>(k);
      }
    }
  }

  std::mt19937_64 engine_;
};

}  // namespace crbm
