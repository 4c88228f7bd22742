#pragma once

// Reference root finder for tests and benchmarks. It shares nothing with the
// Newton pipeline: evaluation, bisection, deflation and the quadratic are
// redone here in extended precision.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "tusi/error.hpp"
#include "tusi/poly.hpp"

namespace tusi::oracle {

struct ComplexRoots {
  double re = 0.0;
  double im = 0.0;
};

struct OracleRoots {
  std::vector<double> reals;  // ascending, repeated by multiplicity
  std::optional<ComplexRoots> complex_pair;
  bool cardano_checked = false;     // single real root: compared with Cardano
  double cardano_deviation = 0.0;   // |bisection - Cardano|
  bool cardano_agrees = true;       // deviation <= 1e-8
};

namespace detail {

using real = long double;

struct Monic {
  real b2, b1, b0;
};

inline Monic monic(const GeneralCubic& c) {
  const real a3 = c.a3;
  return {c.a2 / a3, c.a1 / a3, c.a0 / a3};
}

inline real value(const Monic& m, real x) { return x * x * x + m.b2 * x * x + m.b1 * x + m.b0; }

inline int sign(real v) { return (v > 0) - (v < 0); }

/// Halves [lo, hi] keeping a sign change until the width is at most
/// max(abs_tol, rel_tol * max(|lo|, |hi|)) or the midpoint no longer separates
/// the endpoints.
inline real bisect(const Monic& m, real lo, real hi, real abs_tol, real rel_tol) {
  int s_lo = sign(value(m, lo));
  if (s_lo == 0) return lo;
  if (sign(value(m, hi)) == 0) return hi;
  for (int i = 0; i < 20000; ++i) {
    if (hi - lo <= std::max(abs_tol, rel_tol * std::max(std::abs(lo), std::abs(hi)))) break;
    const real mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    const int s_mid = sign(value(m, mid));
    if (s_mid == 0) return mid;
    if (s_mid == s_lo) lo = mid;
    else hi = mid;
  }
  return lo + (hi - lo) / 2;
}

/// Real roots of x^2 + b x + c, or nothing when they are complex.
struct Quadratic {
  bool complex;
  real x1, x2, im;
};

inline Quadratic quadratic(real b, real c) {
  const real disc = b * b - 4 * c;
  if (disc < 0) return {true, -b / 2, -b / 2, std::sqrt(-disc) / 2};
  const real big = -(b + (b < 0 ? -1 : 1) * std::sqrt(disc)) / 2;
  if (big == 0) return {false, 0, 0, 0};
  return {false, big, c / big, 0};
}

}  // namespace detail

/// Bisection to a bracket of width <= tol; deterministic.
inline double bisect_root(const GeneralCubic& c, double lo, double hi, double tol) {
  if (!(lo < hi)) throw error(errc::invalid_input, "bisection needs lo < hi");
  if (!(tol > 0.0)) throw error(errc::invalid_input, "bisection tolerance must be positive");
  const auto m = detail::monic(c);
  const int s_lo = detail::sign(detail::value(m, lo));
  const int s_hi = detail::sign(detail::value(m, hi));
  if (s_lo != 0 && s_lo == s_hi) throw error(errc::no_sign_change, "bisection bracket has no sign change");
  return static_cast<double>(detail::bisect(m, lo, hi, tol, 0));
}

/// All roots by sign sampling at -R, the critical points and R (R the Cauchy
/// bound), bisection of every sign-change bracket, and deflation when only one
/// real root is isolated. With a single real root the result is compared
/// against Cardano's real-radical expression. tol = 0 bisects to full
/// extended precision relative to the root; a positive tol is an absolute
/// bracket width.
inline OracleRoots oracle_all_roots(const GeneralCubic& c, double tol = 0.0) {
  require_valid(c);
  using detail::real;
  const auto m = detail::monic(c);
  const real bound = 1 + std::max({std::abs(m.b2), std::abs(m.b1), std::abs(m.b0)});
  const real full_precision = 4 * std::numeric_limits<real>::epsilon();

  // Critical points: 3x^2 + 2 b2 x + b1 = 0, i.e. x^2 + (2 b2 / 3) x + b1 / 3.
  struct Sample {
    real x;
    bool critical;
  };
  std::vector<Sample> samples = {{-bound, false}};
  const auto crit = detail::quadratic(2 * m.b2 / 3, m.b1 / 3);
  bool single_critical = false;
  if (!crit.complex) {
    const real lo = std::min(crit.x1, crit.x2);
    const real hi = std::max(crit.x1, crit.x2);
    samples.push_back({lo, true});
    if (hi != lo) samples.push_back({hi, true});
    else single_critical = true;
  }
  samples.push_back({bound, false});

  std::vector<std::pair<real, int>> found;  // root, multiplicity
  std::vector<real> vals;
  for (const auto& s : samples) vals.push_back(detail::value(m, s.x));
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (vals[i] == 0) found.push_back({samples[i].x, samples[i].critical ? (single_critical ? 3 : 2) : 1});
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    if (detail::sign(vals[i]) * detail::sign(vals[i + 1]) < 0) {
      found.push_back({detail::bisect(m, samples[i].x, samples[i + 1].x, tol, tol > 0.0 ? 0 : full_precision), 1});
    }
  }

  int total = 0;
  for (const auto& f : found) total += f.second;

  OracleRoots out;
  if (total == 1) {
    const real r = found.front().first;
    // Synthetic division, from the top for small roots and from the bottom for large ones.
    real qb, qc;
    if (std::abs(r) <= 1) {
      qb = m.b2 + r;
      qc = m.b1 + r * qb;
    } else {
      qc = -m.b0 / r;
      qb = (qc - m.b1) / r;
    }
    const auto rest = detail::quadratic(qb, qc);
    if (rest.complex) {
      out.complex_pair = ComplexRoots{static_cast<double>(rest.x1), static_cast<double>(rest.im)};
    } else {
      found.push_back({rest.x1, 1});
      found.push_back({rest.x2, 1});
    }
  } else if (total == 2) {
    // Vieta: the roots sum to -b2.
    real sum = 0;
    for (const auto& f : found) sum += f.first * f.second;
    found.push_back({-m.b2 - sum, 1});
  }

  for (const auto& f : found)
    for (int k = 0; k < f.second; ++k) out.reals.push_back(static_cast<double>(f.first));
  std::sort(out.reals.begin(), out.reals.end());

  if (out.complex_pair) {
    // Cardano on the depressed cubic, larger-magnitude radical first.
    const real shift = m.b2 / 3;
    const real p = m.b1 - m.b2 * shift;
    const real q = (2 * shift * shift - m.b1) * shift + m.b0;
    const real minus_delta = q * q / 4 + p * p * p / 27;
    if (minus_delta >= 0) {
      const real root_term = std::sqrt(minus_delta);
      const real u = std::cbrt(-q / 2 - (q < 0 ? -1 : 1) * root_term);
      const real v = u == 0 ? real(0) : -p / (3 * u);
      const real cardano = u + v - shift;
      const real bis = found.front().first;
      out.cardano_checked = true;
      out.cardano_deviation = static_cast<double>(std::abs(cardano - bis));
      out.cardano_agrees = out.cardano_deviation <= 1e-8;
    }
  }
  return out;
}

}  // namespace tusi::oracle
