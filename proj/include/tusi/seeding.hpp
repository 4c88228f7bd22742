#pragma once

// Explicit Newton seeds for the canonical forms.
//
// A 5% approximation of cbrt(q) comes from the decimal scientific notation
// q = m * 10^n, n = 3k + r: the cube root of the mantissa is replaced by the
// nearest member of the grid 1.0, 1.1, ..., 2.6 (nearest in cube), and
// 10^(n/3) = 10^k * cbrt(10)^r uses one stored constant.

#include <array>
#include <cmath>
#include <optional>

#include "tusi/error.hpp"
#include "tusi/reduction.hpp"

namespace tusi {

inline constexpr double cbrt10 = 2.1544346900318837;
inline constexpr double cbrt10_squared = cbrt10 * cbrt10;

struct DecimalParts {
  double m = 1.0;  // mantissa in [1, 10)
  int n = 0;       // exponent, n = 3k + r
  int k = 0;
  int r = 0;  // 0, 1 or 2
};

namespace detail {

/// 10^e without overflow of the intermediate for subnormal-range exponents.
inline double scale_by_pow10(double x, int e) {
  const int half = e / 2;
  return x / std::pow(10.0, half) / std::pow(10.0, e - half);
}

/// Cubes (1 + 0.1 j)^3, j = 0..16.
inline constexpr std::array<double, 17> mantissa_cubes = [] {
  std::array<double, 17> cubes{};
  for (int j = 0; j < 17; ++j) {
    const double v = (10.0 + j) / 10.0;
    cubes[j] = v * v * v;
  }
  return cubes;
}();

/// Midpoints between consecutive cubes; m above midpoint i is nearer cube i+1.
inline constexpr std::array<double, 16> mantissa_midpoints = [] {
  std::array<double, 16> mids{};
  for (int j = 0; j < 16; ++j) mids[j] = (mantissa_cubes[j] + mantissa_cubes[j + 1]) / 2.0;
  return mids;
}();

}  // namespace detail

inline DecimalParts decimal_parts(double q) {
  if (!(q > 0.0) || !std::isfinite(q))
    throw error(errc::domain, "decimal parts need a finite positive value");
  int n = static_cast<int>(std::floor(std::log10(q)));
  double m = detail::scale_by_pow10(q, n);
  // log10 can land one decade off right at a power of ten.
  while (m >= 10.0) m = detail::scale_by_pow10(q, ++n);
  while (m < 1.0) m = detail::scale_by_pow10(q, --n);
  if (m >= 10.0) {  // q within rounding below a power of ten: its mantissa rounds to 10
    ++n;
    m = 1.0;
  }
  const int r = ((n % 3) + 3) % 3;
  return {m, n, (n - r) / 3, r};
}

/// Index j of the cube (1 + 0.1 j)^3 nearest to a mantissa m in [1, 10), ties
/// toward the smaller j. j counts the midpoints below m; four comparisons.
inline int nearest_cube_index(double m) noexcept {
  int j = 0;
  for (int step : {8, 4, 2, 1})
    if (detail::mantissa_midpoints[j + step - 1] < m) j += step;
  return j;
}

struct CubeRootEstimate {
  DecimalParts parts;
  double rho_m = 1.0;  // 5% estimate of cbrt(m)
  double c_n = 1.0;    // cbrt(10^n)
  double rho_q = 1.0;  // c_n * rho_m
};

inline double cube_root_of_power10(const DecimalParts& parts) {
  const double tail = parts.r == 0 ? 1.0 : parts.r == 1 ? cbrt10 : cbrt10_squared;
  return std::pow(10.0, parts.k) * tail;
}

inline CubeRootEstimate cube_root_estimate(double q) {
  CubeRootEstimate out;
  out.parts = decimal_parts(q);
  out.rho_m = (10.0 + nearest_cube_index(out.parts.m)) / 10.0;
  out.c_n = cube_root_of_power10(out.parts);
  out.rho_q = out.c_n * out.rho_m;
  return out;
}

/// Within 5% of cbrt(q) for every positive q.
inline double rho_q(double q) { return cube_root_estimate(q).rho_q; }

/// Which seed rule applies. The numbering follows the five certified seed
/// families; fallback marks parameter ranges without an explicit seed.
enum class SeedCase : int {
  fallback = 0,
  trivial = 1,          // x0 = rho_q
  positive_normal = 2,  // x0 = 0.95 rho_q, q >= 3 sqrt 2
  tusi_i = 3,           // x0 = -0.95 rho_q, q >= 8
  tusi_ii_upper = 4,    // x0 = 1, q in [0, 1/12]
  tusi_ii_lower = 5,    // x0 = -1/3, q in (1/12, 4/27]
};

struct SeedChoice {
  std::optional<double> x0;
  SeedCase case_tag = SeedCase::fallback;
  std::optional<double> rho_q;  // cases 1-3
  bool certified = false;
};

inline constexpr double positive_normal_seed_floor = 4.242640687119285;  // 3 sqrt 2
inline constexpr double tusi_i_seed_floor = 8.0;
inline constexpr double tusi_ii_case_split = 1.0 / 12.0;

inline SeedChoice select_seed(const CanonicalForm& f) {
  SeedChoice out;
  const double q = f.q;
  switch (f.tag) {
    case FormTag::trivial:
      out.case_tag = SeedCase::trivial;
      out.rho_q = q > 0.0 ? rho_q(q) : 0.0;
      out.x0 = *out.rho_q;
      break;
    case FormTag::positive_normal:
      if (q >= positive_normal_seed_floor) {
        out.case_tag = SeedCase::positive_normal;
        out.rho_q = rho_q(q);
        out.x0 = 0.95 * *out.rho_q;
      }
      break;
    case FormTag::tusi_i:
      if (q >= tusi_i_seed_floor) {
        out.case_tag = SeedCase::tusi_i;
        out.rho_q = rho_q(q);
        out.x0 = -0.95 * *out.rho_q;
      }
      break;
    case FormTag::tusi_ii:
      if (q <= tusi_ii_case_split) {
        out.case_tag = SeedCase::tusi_ii_upper;
        out.x0 = 1.0;
      } else {
        out.case_tag = SeedCase::tusi_ii_lower;
        out.x0 = -1.0 / 3.0;
      }
      break;
  }
  out.certified = out.case_tag != SeedCase::fallback;
  return out;
}

/// M0 in the a-priori bound |x_t - root| <= M0 * 2^(1 - 2^t): cbrt(q) for the
/// rho_q seeds, 3 for the fixed Tusi seeds.
inline double bound_scale(const CanonicalForm& f, const SeedChoice& seed) {
  switch (seed.case_tag) {
    case SeedCase::trivial:
    case SeedCase::positive_normal:
    case SeedCase::tusi_i: return std::cbrt(f.q);
    case SeedCase::tusi_ii_upper:
    case SeedCase::tusi_ii_lower: return 3.0;
    case SeedCase::fallback: break;
  }
  throw error(errc::uncertified_seed, "no a-priori bound for an uncertified seed");
}

inline double certified_bound(double scale, int t) {
  return scale * std::exp2(1.0 - std::exp2(static_cast<double>(t)));
}

inline constexpr int max_certified_iterations = 60;

/// Smallest t >= 1 with certified_bound(M0, t) <= tol, capped at 60.
inline int iterations_needed(const CanonicalForm& f, const SeedChoice& seed, double tol) {
  if (!(tol > 0.0)) throw error(errc::invalid_input, "tolerance must be positive");
  if (!seed.certified) throw error(errc::uncertified_seed, "iteration budget needs a certified seed");
  const double scale = bound_scale(f, seed);
  for (int t = 1; t < max_certified_iterations; ++t)
    if (certified_bound(scale, t) <= tol) return t;
  return max_certified_iterations;
}

}  // namespace tusi
