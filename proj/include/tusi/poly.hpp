#pragma once

// Cubic and quadratic primitives: Horner evaluation with derivatives, the
// depressed-cubic discriminant, a cancellation-free quadratic solver and
// synthetic division by a known root.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <string>

#include "tusi/error.hpp"

namespace tusi {

/// a3*x^3 + a2*x^2 + a1*x + a0 with a3 != 0.
struct GeneralCubic {
  double a3 = 1.0;
  double a2 = 0.0;
  double a1 = 0.0;
  double a0 = 0.0;
};

/// Monic x^3 + p*x + q.
struct DepressedCubic {
  double p = 0.0;
  double q = 0.0;
};

/// P(x), P'(x), P''(x) at one point.
struct Evaluation {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

inline bool is_valid(const GeneralCubic& g) noexcept {
  return g.a3 != 0.0 && std::isfinite(g.a3) && std::isfinite(g.a2) && std::isfinite(g.a1) &&
         std::isfinite(g.a0);
}

inline void require_valid(const GeneralCubic& g) {
  if (!std::isfinite(g.a3) || !std::isfinite(g.a2) || !std::isfinite(g.a1) ||
      !std::isfinite(g.a0))
    throw error(errc::invalid_input, "coefficients must be finite");
  if (g.a3 == 0.0) throw error(errc::invalid_input, "leading coefficient must be nonzero");
}

inline Evaluation evaluate(const GeneralCubic& c, double x) noexcept {
  return {((c.a3 * x + c.a2) * x + c.a1) * x + c.a0, (3.0 * c.a3 * x + 2.0 * c.a2) * x + c.a1,
          6.0 * c.a3 * x + 2.0 * c.a2};
}

inline Evaluation evaluate(const DepressedCubic& c, double x) noexcept {
  return {(x * x + c.p) * x + c.q, 3.0 * x * x + c.p, 6.0 * x};
}

/// Anything the certification and iteration code can run on.
template <typename T>
concept cubic_polynomial = requires(const T& c, double x) {
  { evaluate(c, x) } -> std::same_as<Evaluation>;
};

inline GeneralCubic to_general(const DepressedCubic& d) noexcept { return {1.0, 0.0, d.p, d.q}; }
inline GeneralCubic to_general(const GeneralCubic& g) noexcept { return g; }

/// Delta = -(q^2/4 + p^3/27). Positive: three distinct real roots; negative:
/// one real root and a complex pair; zero: a repeated root.
inline double discriminant(const DepressedCubic& d) noexcept {
  return -(d.q * d.q / 4.0 + d.p * d.p * d.p / 27.0);
}

struct QuadraticRoots {
  enum class Kind { two_real, double_real, complex_pair };

  Kind kind = Kind::two_real;
  double r1 = 0.0;  // smaller real root, or real part
  double r2 = 0.0;
  double im = 0.0;  // > 0 only for complex_pair
};

/// Roots of x^2 + b*x + c. The larger-magnitude root comes from the
/// sign-aware formula and the other from the product c, so neither suffers
/// cancellation. Real roots are returned in ascending order.
inline QuadraticRoots solve_quadratic(double b, double c) noexcept {
  using Kind = QuadraticRoots::Kind;
  // Scale b^2 - 4c so that large |b| does not overflow the square.
  const double scale = std::max({std::abs(b), std::sqrt(std::abs(c)), 1.0});
  const double bs = b / scale;
  const double disc_scaled = bs * bs - 4.0 * (c / scale) / scale;

  if (disc_scaled < 0.0) {
    return {Kind::complex_pair, -b / 2.0, -b / 2.0, scale * std::sqrt(-disc_scaled) / 2.0};
  }
  if (disc_scaled == 0.0) return {Kind::double_real, -b / 2.0, -b / 2.0, 0.0};

  const double root_disc = scale * std::sqrt(disc_scaled);
  const double big = -(b + std::copysign(root_disc, b)) / 2.0;
  const double small = c / big;
  return {Kind::two_real, std::min(big, small), std::max(big, small), 0.0};
}

/// Quadratic factor x^2 + b*x + c0 left after dividing the monic cubic by (x - root).
struct Deflated {
  double b = 0.0;
  double c0 = 0.0;
};

/// Synthetic division of the monic cubic by (x - root). Division can run from
/// the leading coefficient down or from the constant term up; the direction
/// whose unused coefficient equation is matched more closely is kept.
inline Deflated deflate(const GeneralCubic& g, double root) {
  if (!std::isfinite(root)) throw error(errc::non_finite, "deflation root must be finite");
  const double b2 = g.a2 / g.a3;
  const double b1 = g.a1 / g.a3;
  const double b0 = g.a0 / g.a3;

  // (x - r)(x^2 + b x + c) = x^3 + (b - r) x^2 + (c - b r) x - c r
  const Deflated forward{b2 + root, b1 + root * (b2 + root)};
  const double forward_miss =
      std::abs(b0 + forward.c0 * root) / (std::abs(b0) + std::abs(forward.c0 * root) + 1e-300);

  if (root == 0.0) return forward;
  const double c_back = -b0 / root;
  const Deflated backward{(c_back - b1) / root, c_back};
  const double backward_miss = std::abs(b2 - (backward.b - root)) /
                               (std::abs(b2) + std::abs(backward.b) + std::abs(root) + 1e-300);

  return backward_miss < forward_miss ? backward : forward;
}

}  // namespace tusi
