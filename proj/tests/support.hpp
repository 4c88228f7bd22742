#pragma once

// Deterministic generators and reference evaluations shared by the tests.

#include <cmath>
#include <cstdint>
#include <random>

#include "tusi/poly.hpp"

namespace tusi::testing {

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

  /// Magnitude log-uniform in [lo, hi].
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  double sign() { return std::bernoulli_distribution(0.5)(rng_) ? 1.0 : -1.0; }

  double signed_log_uniform(double lo, double hi) { return sign() * log_uniform(lo, hi); }

  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Coefficients with log-uniform magnitudes in [1e-3, 1e6] and uniform signs.
  GeneralCubic cubic() {
    return {signed_log_uniform(1e-3, 1e6), signed_log_uniform(1e-3, 1e6),
            signed_log_uniform(1e-3, 1e6), signed_log_uniform(1e-3, 1e6)};
  }

 private:
  std::mt19937_64 rng_;
};

/// |P(r)| / (|a3| (1 + |r|)^3), with P evaluated in extended precision so the
/// measurement itself adds no rounding.
inline double normalized_residual(const GeneralCubic& g, double r) {
  const long double x = r;
  const long double v = ((static_cast<long double>(g.a3) * x + g.a2) * x + g.a1) * x + g.a0;
  const long double scale = std::abs(static_cast<long double>(g.a3)) * std::pow(1 + std::abs(x), 3);
  return static_cast<double>(std::abs(v) / scale);
}

/// Absolute error relative to max(1, |reference|).
inline double scaled_error(double got, double reference) {
  return std::abs(got - reference) / std::max(1.0, std::abs(reference));
}

}  // namespace tusi::testing
