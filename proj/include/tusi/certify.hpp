#pragma once

// Smale's alpha-test for a real cubic: x0 is a certified approximate zero when
//
//   |P(x0)| <= |P'(x0)| / (6 gamma(x0)),
//   gamma(x0) = max(|P''(x0) / (2 P'(x0))|, |P'(x0)|^(-1/2)).

#include <algorithm>
#include <cmath>
#include <string>

#include "tusi/error.hpp"
#include "tusi/poly.hpp"

namespace tusi {

inline constexpr double alpha_constant = 1.0 / 6.0;

struct SmaleCertificate {
  double x0 = 0.0;
  double gamma = 0.0;
  double p_abs = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

namespace detail {

inline double gamma_from(const Evaluation& e, double x) {
  if (e.d1 == 0.0) throw error(errc::critical_point, "P'(x) = 0 at x = " + std::to_string(x));
  return std::max(std::abs(e.d2 / (2.0 * e.d1)), 1.0 / std::sqrt(std::abs(e.d1)));
}

}  // namespace detail

template <cubic_polynomial C>
double gamma(const C& c, double x) {
  return detail::gamma_from(evaluate(c, x), x);
}

template <cubic_polynomial C>
SmaleCertificate alpha_test(const C& c, double x) {
  const Evaluation e = evaluate(c, x);
  SmaleCertificate cert;
  cert.x0 = x;
  cert.gamma = detail::gamma_from(e, x);
  cert.p_abs = std::abs(e.value);
  cert.threshold = alpha_constant * std::abs(e.d1) / cert.gamma;
  cert.passed = cert.p_abs <= cert.threshold;
  return cert;
}

}  // namespace tusi
