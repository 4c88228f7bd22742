#pragma once

// Newton iteration with certified stopping, the end-to-end cubic pipeline:
//
//   depress -> canonicalize -> explicit seed (or alpha-certified bisection
//   seed) -> Newton -> deflate -> back-map -> refine on the original cubic.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "tusi/certify.hpp"
#include "tusi/error.hpp"
#include "tusi/poly.hpp"
#include "tusi/reduction.hpp"
#include "tusi/seeding.hpp"

namespace tusi {

inline constexpr double default_tolerance = 1e-12;
inline constexpr int default_max_iterations = 60;
inline constexpr int fallback_max_halvings = 200;
inline constexpr int refinement_steps = 2;

struct RootEstimate {
  double value = 0.0;
  double error_bound = 0.0;  // a-priori bound when certified, else last step size
  int iterations = 0;
  double residual = 0.0;       // |P(value)|
  std::vector<double> trace;   // x_0 .. x_t
  bool converged = false;      // step test fired or the certified bound met tol
};

/// Newton's method x <- x - P(x)/P'(x). Stops after t_max steps or once a
/// step is at most tol * max(1, |x|). certified_scale is M0 of the a-priori
/// bound M0 * 2^(1 - 2^t); without it the error bound is the last step size.
template <cubic_polynomial C>
RootEstimate newton_iterate(const C& c, double x0, int t_max, double tol,
                            std::optional<double> certified_scale = std::nullopt) {
  if (t_max < 1) throw error(errc::invalid_input, "t_max must be at least 1");
  if (!(tol >= 0.0)) throw error(errc::invalid_input, "tolerance must be non-negative");
  if (!std::isfinite(x0)) throw error(errc::non_finite, "seed must be finite");

  RootEstimate out;
  out.trace.reserve(static_cast<std::size_t>(std::min(t_max, 64)) + 1);
  out.trace.push_back(x0);
  double x = x0;
  double last_step = 0.0;
  for (int k = 0; k < t_max; ++k) {
    const Evaluation e = evaluate(c, x);
    if (e.d1 == 0.0)
      throw iteration_error(errc::critical_point, "Newton hit P'(x) = 0", std::move(out.trace));
    const double next = x - e.value / e.d1;
    if (!std::isfinite(next))
      throw iteration_error(errc::non_finite, "Newton iterate overflowed", std::move(out.trace));
    out.trace.push_back(next);
    last_step = std::abs(next - x);
    const bool small_step = last_step <= tol * std::max(1.0, std::abs(x));
    x = next;
    if (small_step) {
      out.converged = true;
      break;
    }
  }
  out.value = x;
  out.iterations = static_cast<int>(out.trace.size()) - 1;
  out.residual = std::abs(evaluate(c, x).value);
  if (certified_scale) {
    out.error_bound = certified_bound(*certified_scale, out.iterations);
    out.converged = out.converged || out.error_bound <= tol;
  } else {
    out.error_bound = last_step;
  }
  return out;
}

/// Bisects a sign-change bracket until its midpoint passes the alpha-test.
/// Terminates for a simple root since the certified region around it is open.
template <cubic_polynomial C>
double certified_seed_fallback(const C& c, double lo, double hi) {
  double f_lo = evaluate(c, lo).value;
  const double f_hi = evaluate(c, hi).value;
  if (std::signbit(f_lo) == std::signbit(f_hi) && f_lo != 0.0 && f_hi != 0.0)
    throw error(errc::no_sign_change, "fallback bracket has no sign change");

  for (int i = 0; i < fallback_max_halvings; ++i) {
    const double mid = lo + (hi - lo) / 2.0;
    const Evaluation e = evaluate(c, mid);
    if (e.d1 != 0.0 && alpha_test(c, mid).passed) return mid;
    if (e.value == 0.0) break;  // root with P' = 0 there
    if (std::signbit(e.value) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = e.value;
    } else {
      hi = mid;
    }
  }
  throw error(errc::degenerate_root, "no certified point found in bracket");
}

struct CanonicalSolution {
  RootEstimate primary;
  QuadraticRoots others;  // remaining two roots after deflation
  SeedChoice seed;
};

namespace detail {

inline RootEstimate exact_estimate(double value) {
  RootEstimate est;
  est.value = value;
  est.trace = {value};
  est.converged = true;
  return est;
}

/// Sign-change bracket for the uncovered positive normal and Tusi I ranges,
/// widened by doubling. Uses rho_q / 0.95 >= cbrt(q).
inline std::pair<double, double> fallback_bracket(const CanonicalForm& f) {
  const GeneralCubic poly = to_cubic(f);
  const double cube_root_cap = rho_q(f.q) / 0.95 + 1.0;
  if (f.tag == FormTag::positive_normal) {
    double hi = cube_root_cap;
    while (evaluate(poly, hi).value <= 0.0) hi *= 2.0;
    return {0.0, hi};
  }
  double lo = -cube_root_cap;
  while (evaluate(poly, lo).value >= 0.0) lo *= 2.0;
  return {lo, -1.0 / 3.0};
}

}  // namespace detail

/// Primary root of a canonical form plus the two deflated roots.
inline CanonicalSolution solve_canonical(const CanonicalForm& f, double tol = default_tolerance,
                                         int max_iter = default_max_iterations) {
  if (!is_valid(f)) throw error(errc::invalid_input, "invalid canonical form");
  if (!(tol > 0.0)) throw error(errc::invalid_input, "tolerance must be positive");
  if (max_iter < 1) throw error(errc::invalid_input, "max_iter must be at least 1");
  using Kind = QuadraticRoots::Kind;

  CanonicalSolution out;
  out.seed = select_seed(f);
  const GeneralCubic poly = to_cubic(f);

  // Closed forms: repeated roots, where Newton certification does not apply.
  if (f.tag == FormTag::trivial && f.q == 0.0) {
    out.primary = detail::exact_estimate(0.0);
    out.others = {Kind::double_real, 0.0, 0.0, 0.0};
    return out;
  }
  if (f.tag == FormTag::positive_normal && f.q == 0.0) {
    out.primary = detail::exact_estimate(0.0);
    out.others = {Kind::complex_pair, 0.0, 0.0, 1.0};
    return out;
  }
  if (f.tag == FormTag::tusi_ii) {
    const double delta = f.delta.value_or(27.0 * f.q / 4.0);
    if (delta <= tusi_double_root_tolerance) {
      out.primary = detail::exact_estimate(1.0);
      out.others = {Kind::double_real, 0.0, 0.0, 0.0};
      return out;
    }
    if (delta >= 1.0 - tusi_double_root_tolerance) {
      out.primary = detail::exact_estimate(-1.0 / 3.0);
      out.others = {Kind::double_real, 2.0 / 3.0, 2.0 / 3.0, 0.0};
      return out;
    }
  }

  if (f.tag == FormTag::trivial) {
    // Orbit of x^3 - q from rho_q is c_n times the orbit of y^3 - m from rho_m.
    const CubeRootEstimate est = cube_root_estimate(f.q);
    const CanonicalForm mantissa_form = CanonicalForm::trivial(est.parts.m);
    const SeedChoice mantissa_seed = select_seed(mantissa_form);
    const int budget = std::min(max_iter, iterations_needed(mantissa_form, mantissa_seed, tol));
    RootEstimate y = newton_iterate(to_cubic(mantissa_form), est.rho_m, budget, tol,
                                    bound_scale(mantissa_form, mantissa_seed));
    for (double& v : y.trace) v *= est.c_n;
    y.value = y.trace.back();
    y.error_bound *= est.c_n;
    y.residual = std::abs(evaluate(poly, y.value).value);
    out.primary = std::move(y);
  } else if (out.seed.certified) {
    const int budget = std::min(max_iter, iterations_needed(f, out.seed, tol));
    out.primary = newton_iterate(poly, *out.seed.x0, budget, tol, bound_scale(f, out.seed));
  } else {
    const auto [lo, hi] = detail::fallback_bracket(f);
    const double x0 = certified_seed_fallback(poly, lo, hi);
    out.primary = newton_iterate(poly, x0, max_iter, tol);
  }

  const Deflated quad = deflate(poly, out.primary.value);
  out.others = solve_quadratic(quad.b, quad.c0);
  return out;
}

struct RealRoot {
  double value = 0.0;
  int multiplicity = 1;
  double error_bound = 0.0;
};

struct ComplexPair {
  double re = 0.0;
  double im = 0.0;  // > 0; the pair is re +- im i
};

struct SolveResult {
  std::vector<RealRoot> real_roots;  // ascending
  std::optional<ComplexPair> complex_pair;
  CanonicalForm canonical;
  TransformChain chain;
  /// Canonical-variable Newton run; for closed-form cases a zero-iteration
  /// estimate holding the original-variable root.
  RootEstimate primary_estimate;
  bool certified = false;  // alpha-certified seed or closed form
  bool converged = false;
};

/// |Delta| small relative to q^2/4 + |p|^3/27: treated as a repeated root.
inline bool near_multiple_root(const DepressedCubic& d) noexcept {
  const double scale = d.q * d.q / 4.0 + std::abs(d.p * d.p * d.p) / 27.0;
  return std::abs(discriminant(d)) <= 1e-14 * scale;
}

/// As above, with the more accurate Delta carried by depress.
inline bool near_multiple_root(const Depressed& dep) noexcept {
  const DepressedCubic& d = dep.cubic;
  const double scale = d.q * d.q / 4.0 + std::abs(d.p * d.p * d.p) / 27.0;
  return std::abs(dep.accuracy.discriminant) <= 1e-14 * scale;
}

namespace detail {

inline double ulp_floor(double x) { return 2.0 * std::numeric_limits<double>::epsilon() * std::abs(x); }

/// |P(x)| relative to the magnitude of its terms.
inline double backward_error(const GeneralCubic& g, std::complex<double> x) {
  const auto value = ((g.a3 * x + g.a2) * x + g.a1) * x + g.a0;
  const double r = std::abs(x);
  const double terms = ((std::abs(g.a3) * r + std::abs(g.a2)) * r + std::abs(g.a1)) * r + std::abs(g.a0);
  return terms == 0.0 ? 0.0 : std::abs(value) / terms;
}

/// Newton steps on the original cubic. A step is kept only if it lowers |P|
/// and stays well inside the gap to the nearest other root.
inline double refine(const GeneralCubic& g, double x, double gap) {
  for (int i = 0; i < refinement_steps; ++i) {
    const Evaluation e = evaluate(g, x);
    if (e.d1 == 0.0 || e.value == 0.0) break;
    const double step = e.value / e.d1;
    const double next = x - step;
    if (!std::isfinite(next) || std::abs(step) > 0.25 * gap) break;
    if (std::abs(evaluate(g, next).value) > std::abs(e.value)) break;
    x = next;
  }
  return x;
}

/// Rounding bound on the computed value of P(x).
inline double evaluation_error(const GeneralCubic& g, double x) {
  const double r = std::abs(x);
  const double terms = ((std::abs(g.a3) * r + std::abs(g.a2)) * r + std::abs(g.a1)) * r + std::abs(g.a0);
  return 4.0 * std::numeric_limits<double>::epsilon() * terms;
}

/// Twice the remaining Newton correction, with P widened by its rounding
/// error, plus the spacing of doubles at x.
inline double newton_bound(const GeneralCubic& g, double x) {
  const Evaluation e = evaluate(g, x);
  if (e.d1 == 0.0) return INFINITY;
  return 2.0 * (std::abs(e.value) + evaluation_error(g, x)) / std::abs(e.d1) + ulp_floor(x);
}

/// Spread of a double root under the residual P(x): sqrt(2 |P| / |P''|).
inline double double_root_bound(const GeneralCubic& g, double x) {
  const Evaluation e = evaluate(g, x);
  if (e.d2 == 0.0) return INFINITY;
  return std::sqrt(2.0 * (std::abs(e.value) + evaluation_error(g, x)) / std::abs(e.d2)) + ulp_floor(x);
}

/// The two roots other than the anchor, as a real pair or a complex pair.
struct RootPair {
  QuadraticRoots roots;

  double worst_backward_error(const GeneralCubic& g) const {
    if (roots.kind == QuadraticRoots::Kind::complex_pair)
      return backward_error(g, {roots.r1, roots.im});
    return std::max(backward_error(g, roots.r1), backward_error(g, roots.r2));
  }
};

/// x^2 + b x + c from deflating the original cubic; a discriminant within
/// rounding of zero is snapped to a double root.
inline QuadraticRoots pair_from_deflation(const GeneralCubic& g, double anchor) {
  const Deflated quad = deflate(g, anchor);
  const double disc = quad.b * quad.b - 4.0 * quad.c0;
  if (std::abs(disc) <= 1e-14 * std::max(quad.b * quad.b, 4.0 * std::abs(quad.c0)))
    return {QuadraticRoots::Kind::double_real, -quad.b / 2.0, -quad.b / 2.0, 0.0};
  return solve_quadratic(quad.b, quad.c0);
}

inline QuadraticRoots pair_from_canonical(const QuadraticRoots& canonical, const TransformChain& chain) {
  using Kind = QuadraticRoots::Kind;
  if (canonical.kind == Kind::complex_pair) {
    const auto z = back_map(chain, std::complex<double>(canonical.r1, canonical.im));
    return {Kind::complex_pair, z.real(), z.real(), std::abs(z.imag())};
  }
  const double x1 = back_map(chain, canonical.r1);
  if (canonical.kind == Kind::double_real) return {Kind::double_real, x1, x1, 0.0};
  const double x2 = back_map(chain, canonical.r2);
  return {Kind::two_real, std::min(x1, x2), std::max(x1, x2), 0.0};
}

/// Refines the anchor, then attaches the better of the candidate pairs
/// (smaller backward error on the original cubic), refined in turn.
inline void assemble(const GeneralCubic& g, double anchor, double anchor_bound,
                     const std::optional<QuadraticRoots>& canonical_pair, SolveResult& out) {
  using Kind = QuadraticRoots::Kind;
  const double refined = refine(g, anchor, INFINITY);
  const double bound = anchor_bound + std::abs(refined - anchor) + newton_bound(g, refined);

  QuadraticRoots pair = pair_from_deflation(g, refined);
  if (canonical_pair && pair.kind != Kind::double_real &&
      RootPair{*canonical_pair}.worst_backward_error(g) < RootPair{pair}.worst_backward_error(g))
    pair = *canonical_pair;

  out.real_roots = {{refined, 1, bound}};
  switch (pair.kind) {
    case Kind::complex_pair: out.complex_pair = ComplexPair{pair.r1, pair.im}; break;
    case Kind::double_real:
      out.real_roots.push_back({pair.r1, 2, double_root_bound(g, pair.r1)});
      break;
    case Kind::two_real: {
      const double gap = pair.r2 - pair.r1;
      const double r1 = refine(g, pair.r1, std::min(gap, std::abs(pair.r1 - refined)));
      const double r2 = refine(g, pair.r2, std::min(gap, std::abs(pair.r2 - refined)));
      out.real_roots.push_back({r1, 1, newton_bound(g, r1)});
      out.real_roots.push_back({r2, 1, newton_bound(g, r2)});
      break;
    }
  }
  std::sort(out.real_roots.begin(), out.real_roots.end(),
            [](const RealRoot& a, const RealRoot& b) { return a.value < b.value; });
}

}  // namespace detail

/// Real roots (with multiplicity and error bounds) and the complex pair of
/// a3 x^3 + a2 x^2 + a1 x + a0.
///
/// The root found in canonical form is mapped back and refined on the
/// original cubic. The other two come from deflating the original cubic at
/// it, or from the canonical deflation mapped back, whichever has the smaller
/// backward error: large translations cost the canonical pair its relative
/// accuracy when it is small next to the anchor.
inline SolveResult solve(const GeneralCubic& g, double tol = default_tolerance,
                         int max_iter = default_max_iterations) {
  require_valid(g);
  if (!(tol > 0.0)) throw error(errc::invalid_input, "tolerance must be positive");
  if (max_iter < 1) throw error(errc::invalid_input, "max_iter must be at least 1");

  const Depressed dep = depress(g);
  const Canonicalized can = canonicalize(dep.cubic, dep.accuracy);
  const DepressedCubic& d = dep.cubic;

  SolveResult out;
  out.canonical = can.form;
  out.chain = compose(dep.chain, can.chain);
  const auto to_original = [&](double y) { return back_map(dep.chain, y); };

  if (d.q == 0.0) {
    // x^3 + p x = x (x^2 + p)
    const double zero = to_original(0.0);
    out.primary_estimate = detail::exact_estimate(zero);
    out.certified = out.converged = true;
    if (d.p < 0.0) {
      const double r = std::sqrt(-d.p);
      const double lo = to_original(-r);
      const double hi = to_original(r);
      out.real_roots = {{lo, 1, detail::newton_bound(g, lo)},
                        {zero, 1, detail::newton_bound(g, zero)},
                        {hi, 1, detail::newton_bound(g, hi)}};
    } else if (d.p > 0.0) {
      out.real_roots = {{zero, 1, detail::newton_bound(g, zero)}};
      out.complex_pair = ComplexPair{zero, std::sqrt(d.p)};
    } else {
      out.real_roots = {{zero, 3, 0.0}};
    }
    return out;
  }

  if (near_multiple_root(dep)) {
    // p < 0 here. The repeated root sits at the critical point +-sqrt(-p/3)
    // where |P| is smaller; the simple root, at -2 times it, anchors deflation.
    const double s = std::sqrt(-d.p / 3.0);
    const double dbl = std::abs(evaluate(d, s).value) <= std::abs(evaluate(d, -s).value) ? s : -s;
    const double anchor = to_original(-2.0 * dbl);
    out.primary_estimate = detail::exact_estimate(anchor);
    out.certified = out.converged = true;
    detail::assemble(g, anchor, 0.0, std::nullopt, out);
    return out;
  }

  const CanonicalSolution sol = solve_canonical(can.form, tol, max_iter);
  out.primary_estimate = sol.primary;
  out.certified = true;
  out.converged = sol.primary.converged;

  const double y0 = sol.primary.value;
  detail::assemble(g, back_map(out.chain, y0), back_map_bound(out.chain, y0, sol.primary.error_bound),
                   detail::pair_from_canonical(sol.others, out.chain), out);
  return out;
}

}  // namespace tusi
