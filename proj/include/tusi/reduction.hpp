#pragma once

// Reduction of an arbitrary real cubic to one of four canonical forms:
//
//   trivial          x^3 - q,        q >= 0
//   positive normal  x^3 + x - q,    q >= 0
//   Tusi type I      x^3 - x^2 + q,  q > 4/27      (one real root)
//   Tusi type II     x^3 - x^2 + q,  0 <= q <= 4/27 (three real roots)
//
// Every substitution is recorded so canonical roots map back to the
// original variable. Tusi forms are parameterized by delta = 27 q / 4.

#include <cmath>
#include <complex>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>
#include <vector>

#include "tusi/error.hpp"
#include "tusi/poly.hpp"

namespace tusi {

inline constexpr double tusi_constant = 4.0 / 27.0;

/// delta within this distance of 0 or 1 is treated as an exact double root.
inline constexpr double tusi_double_root_tolerance = 1e-14;

// Substitutions x = f(y) from the newer variable y to the previous variable x.
struct Translate {
  double alpha;  // x = y + alpha
};
struct Scale {
  double s;  // x = s * y, s > 0
};
struct Negate {};  // x = -y
struct InvertScale {
  double c;  // x = c / y, c != 0
};

using TransformStep = std::variant<Translate, Scale, Negate, InvertScale>;

/// Steps run from the original variable (front) to the canonical one (back).
/// leading_scale collects polynomial multipliers, which do not move roots.
struct TransformChain {
  std::vector<TransformStep> steps;
  double leading_scale = 1.0;

  void append(const TransformChain& inner) {
    steps.insert(steps.end(), inner.steps.begin(), inner.steps.end());
    leading_scale *= inner.leading_scale;
  }
};

inline TransformChain compose(TransformChain outer, const TransformChain& inner) {
  outer.append(inner);
  return outer;
}

enum class FormTag { trivial, positive_normal, tusi_i, tusi_ii };

inline std::string_view to_string(FormTag tag) noexcept {
  switch (tag) {
    case FormTag::trivial: return "trivial";
    case FormTag::positive_normal: return "positive_normal";
    case FormTag::tusi_i: return "tusi_i";
    case FormTag::tusi_ii: return "tusi_ii";
  }
  return "unknown";
}

inline std::optional<FormTag> form_from_string(std::string_view name) noexcept {
  for (auto tag : {FormTag::trivial, FormTag::positive_normal, FormTag::tusi_i, FormTag::tusi_ii})
    if (to_string(tag) == name) return tag;
  return std::nullopt;
}

struct CanonicalForm {
  FormTag tag = FormTag::trivial;
  double q = 0.0;
  std::optional<double> delta;  // Tusi tags only

  static CanonicalForm trivial(double q) { return {FormTag::trivial, q, std::nullopt}; }
  static CanonicalForm positive_normal(double q) {
    return {FormTag::positive_normal, q, std::nullopt};
  }
  /// Tags as type I or II from q; delta is derived from q.
  static CanonicalForm tusi(double q) {
    return {q > tusi_constant ? FormTag::tusi_i : FormTag::tusi_ii, q, 27.0 * q / 4.0};
  }
  static CanonicalForm tusi_from_delta(double delta) { return tusi(delta * tusi_constant); }

  bool is_tusi() const noexcept { return tag == FormTag::tusi_i || tag == FormTag::tusi_ii; }
};

inline bool is_valid(const CanonicalForm& f) noexcept {
  if (!std::isfinite(f.q)) return false;
  switch (f.tag) {
    case FormTag::trivial:
    case FormTag::positive_normal: return f.q >= 0.0 && !f.delta;
    case FormTag::tusi_i: return f.q > tusi_constant && f.delta.has_value();
    case FormTag::tusi_ii: return f.q >= 0.0 && f.q <= tusi_constant && f.delta.has_value();
  }
  return false;
}

/// The polynomial a canonical form stands for.
inline GeneralCubic to_cubic(const CanonicalForm& f) noexcept {
  switch (f.tag) {
    case FormTag::trivial: return {1.0, 0.0, 0.0, -f.q};
    case FormTag::positive_normal: return {1.0, 0.0, 1.0, -f.q};
    case FormTag::tusi_i:
    case FormTag::tusi_ii: return {1.0, -1.0, 0.0, f.q};
  }
  return {};
}

/// Rounding bounds of the depressed coefficients, and Delta taken from
/// whichever of the depressed or the general-cubic formula bounds tighter.
/// The general formula keeps Delta accurate when a large translation makes
/// q^2/4 + p^3/27 cancel.
struct DepressedAccuracy {
  double p_error = 0.0;
  double q_error = 0.0;
  double discriminant = 0.0;
  double discriminant_error = 0.0;
};

struct Depressed {
  DepressedCubic cubic;
  TransformChain chain;
  DepressedAccuracy accuracy;
};

namespace detail {

inline DepressedAccuracy depressed_accuracy(double b2, double b1, double b0, double p, double q) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double shift = b2 / 3.0;
  DepressedAccuracy acc;
  acc.p_error = 3.0 * eps * (std::abs(b1) + std::abs(b2 * shift));
  acc.q_error = 4.0 * eps * (2.0 * std::abs(shift * shift * shift) + std::abs(b1 * shift) + std::abs(b0));
  acc.discriminant = discriminant(DepressedCubic{p, q});
  acc.discriminant_error = std::abs(q) / 2.0 * acc.q_error + p * p / 9.0 * acc.p_error +
                           3.0 * eps * (q * q / 4.0 + std::abs(p * p * p) / 27.0);

  // 108 Delta = 18 b2 b1 b0 - 4 b2^3 b0 + b2^2 b1^2 - 4 b1^3 - 27 b0^2
  const double terms[] = {18.0 * b2 * b1 * b0, -4.0 * b2 * b2 * b2 * b0, b2 * b2 * b1 * b1, -4.0 * b1 * b1 * b1,
                          -27.0 * b0 * b0};
  double sum = 0.0, magnitude = 0.0;
  for (double t : terms) {
    sum += t;
    magnitude += std::abs(t);
  }
  const double general = sum / 108.0;
  const double general_error = 12.0 * eps * magnitude / 108.0;
  if (std::isfinite(general_error) && general_error < acc.discriminant_error) {
    acc.discriminant = general;
    acc.discriminant_error = general_error;
  }
  return acc;
}

}  // namespace detail

/// Divide by a3 and translate x = y - a2/(3 a3).
inline Depressed depress(const GeneralCubic& g) {
  require_valid(g);
  const double b2 = g.a2 / g.a3;
  const double b1 = g.a1 / g.a3;
  const double b0 = g.a0 / g.a3;
  const double shift = b2 / 3.0;
  const double p = b1 - b2 * shift;
  const double q = (2.0 * shift * shift - b1) * shift + b0;
  Depressed out{{p, q}, {}, detail::depressed_accuracy(b2, b1, b0, p, q)};
  out.chain.steps.push_back(Translate{-shift});
  out.chain.leading_scale = g.a3;
  if (!std::isfinite(p) || !std::isfinite(q))
    throw error(errc::non_finite, "depressed coefficients overflow");
  return out;
}

struct Canonicalized {
  CanonicalForm form;
  TransformChain chain;
};

/// Case analysis on the sign of p:
///   p = 0  trivial form, negated when needed so q >= 0;
///   p > 0  x = sqrt(p) y gives the positive normal form;
///   p < 0  x = s (3y - 1), s = sqrt(-p/3), gives a Tusi form. A negative Tusi
///          constant is inverted (y = qhat / w, qhat = sqrt(-q)) into the
///          positive normal form w^3 + w - qhat.
///
/// The Tusi constant (2 + q/s^3)/27 cancels when q is close to -2 s^3. Given
/// the rounding bounds of depress, it is then evaluated as the equal
/// -2 Delta / (27 s^3 (q/2 - s^3)) whenever that bounds tighter.
inline Canonicalized canonicalize(const DepressedCubic& d, const std::optional<DepressedAccuracy>& acc = {}) {
  if (!std::isfinite(d.p) || !std::isfinite(d.q))
    throw error(errc::invalid_input, "depressed coefficients must be finite");
  Canonicalized out;
  auto& steps = out.chain.steps;

  if (d.p == 0.0) {
    // x^3 + q = 0
    if (d.q > 0.0) steps.push_back(Negate{});
    out.form = CanonicalForm::trivial(std::abs(d.q));
    return out;
  }

  if (d.p > 0.0) {
    const double root_p = std::sqrt(d.p);
    steps.push_back(Scale{root_p});
    out.chain.leading_scale = d.p * root_p;
    double q = -d.q / (d.p * root_p);
    if (q < 0.0) {
      steps.push_back(Negate{});
      out.chain.leading_scale = -out.chain.leading_scale;
      q = -q;
    }
    out.form = CanonicalForm::positive_normal(q);
    return out;
  }

  const double s = std::sqrt(-d.p / 3.0);
  const double s3 = s * s * s;
  steps.push_back(Translate{-s});
  steps.push_back(Scale{3.0 * s});
  out.chain.leading_scale = 27.0 * s3;
  double tusi_q = (2.0 + d.q / s3) / 27.0;
  if (acc && d.q < 0.0) {
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double p_rel = 1.5 * acc->p_error / std::abs(d.p);
    const double direct_error = (std::abs(d.q) / s3 * (acc->q_error / std::abs(d.q) + p_rel + 4.0 * eps) + 2.0 * eps) / 27.0;
    const double den = d.q / 2.0 - s3;
    const double delta = acc->discriminant;
    const double stable_error = 2.0 *
                                (acc->discriminant_error +
                                 std::abs(delta) * (p_rel + acc->q_error / 2.0 / std::abs(den) + 8.0 * eps)) /
                                (27.0 * s3 * std::abs(den));
    if (stable_error < direct_error) tusi_q = -2.0 * delta / (27.0 * s3 * den);
  }

  if (tusi_q < 0.0) {
    const double qhat = std::sqrt(-tusi_q);
    steps.push_back(InvertScale{qhat});
    out.form = CanonicalForm::positive_normal(qhat);
    return out;
  }
  out.form = CanonicalForm::tusi(tusi_q);
  return out;
}

inline Canonicalized reduce(const GeneralCubic& g) {
  auto dep = depress(g);
  auto can = canonicalize(dep.cubic, dep.accuracy);
  return {can.form, compose(std::move(dep.chain), can.chain)};
}

namespace detail {

template <typename T>
T apply_step(const TransformStep& step, T y) {
  return std::visit(
      [&](const auto& st) -> T {
        using S = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<S, Translate>) {
          return y + st.alpha;
        } else if constexpr (std::is_same_v<S, Scale>) {
          return st.s * y;
        } else if constexpr (std::is_same_v<S, Negate>) {
          return -y;
        } else {
          if (y == T(0)) throw error(errc::pole, "back-map hit the pole of an inversion step");
          return st.c / y;
        }
      },
      step);
}

}  // namespace detail

/// Canonical-variable value to original-variable value.
inline double back_map(const TransformChain& chain, double y) {
  for (auto it = chain.steps.rbegin(); it != chain.steps.rend(); ++it)
    y = detail::apply_step(*it, y);
  return y;
}

inline std::complex<double> back_map(const TransformChain& chain, std::complex<double> y) {
  for (auto it = chain.steps.rbegin(); it != chain.steps.rend(); ++it)
    y = detail::apply_step(*it, y);
  return y;
}

/// Carries an absolute error bound on a canonical value through the chain.
/// Returns infinity when the bound reaches an inversion pole.
inline double back_map_bound(const TransformChain& chain, double y, double bound) {
  for (auto it = chain.steps.rbegin(); it != chain.steps.rend(); ++it) {
    if (const auto* sc = std::get_if<Scale>(&*it)) {
      bound *= sc->s;
    } else if (const auto* inv = std::get_if<InvertScale>(&*it)) {
      const double gap = std::abs(y) - bound;
      if (gap <= 0.0) return INFINITY;
      bound = std::abs(inv->c) * bound / (std::abs(y) * gap);
    }
    y = detail::apply_step(*it, y);
  }
  return bound;
}

inline std::string describe(const TransformStep& step) {
  return std::visit(
      [](const auto& st) -> std::string {
        using S = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<S, Translate>) return "translate " + std::to_string(st.alpha);
        else if constexpr (std::is_same_v<S, Scale>) return "scale " + std::to_string(st.s);
        else if constexpr (std::is_same_v<S, Negate>) return "negate";
        else return "invert_scale " + std::to_string(st.c);
      },
      step);
}

/// Smallest Tusi I constant whose root lies in [-cbrt q, -cbrt(2q/3)].
inline constexpr double tusi_i_narrow_interval_floor = 12.0;

struct RootInterval {
  double lo = 0.0;
  double hi = 0.0;
  int multiplicity = 1;
};

struct RootProfile {
  int real_root_count = 1;  // distinct real roots
  std::vector<RootInterval> intervals;
  bool has_complex_pair = false;
};

/// Root counts and isolating intervals for a canonical form. Intervals are
/// closed and ascending; a zero-width interval marks an exactly known root.
inline RootProfile classify(const CanonicalForm& f) {
  RootProfile out;
  const double q = f.q;
  switch (f.tag) {
    case FormTag::trivial:
      if (q == 0.0) {
        out.intervals.push_back({0.0, 0.0, 3});
        return out;
      }
      out.intervals.push_back({std::cbrt(2.0 * q / 3.0), std::cbrt(2.0 * q), 1});
      out.has_complex_pair = true;
      return out;

    case FormTag::positive_normal:
      if (q >= 3.0 * std::sqrt(2.0))
        out.intervals.push_back({std::cbrt(2.0 * q / 3.0), std::cbrt(q), 1});
      else
        out.intervals.push_back({0.0, 3.0 * std::sqrt(2.0), 1});
      out.has_complex_pair = true;
      return out;

    case FormTag::tusi_i:
      // P(-cbrt q) = -q^(2/3) < 0 always; P(-cbrt(2q/3)) = q/3 - (2q/3)^(2/3)
      // is >= 0 only from q = 12 on.
      if (q >= tusi_i_narrow_interval_floor)
        out.intervals.push_back({-std::cbrt(q), -std::cbrt(2.0 * q / 3.0), 1});
      else
        out.intervals.push_back({-std::cbrt(q), -1.0 / 3.0, 1});
      out.has_complex_pair = true;
      return out;

    case FormTag::tusi_ii: {
      const double delta = f.delta.value_or(27.0 * q / 4.0);
      if (delta <= tusi_double_root_tolerance) {
        out.real_root_count = 2;
        out.intervals = {{0.0, 0.0, 2}, {1.0, 1.0, 1}};
      } else if (delta >= 1.0 - tusi_double_root_tolerance) {
        out.real_root_count = 2;
        out.intervals = {{-1.0 / 3.0, -1.0 / 3.0, 1}, {2.0 / 3.0, 2.0 / 3.0, 2}};
      } else {
        out.real_root_count = 3;
        out.intervals = {{-1.0 / 3.0, 0.0, 1}, {0.0, 2.0 / 3.0, 1}, {2.0 / 3.0, 1.0, 1}};
      }
      return out;
    }
  }
  return out;
}

}  // namespace tusi
