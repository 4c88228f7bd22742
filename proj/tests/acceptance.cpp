// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "support.hpp"
#include "tusi/oracle.hpp"
#include "tusi/solver.hpp"

namespace {

using namespace tusi;

struct Verdict {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double time_limit_ms;  // <= 0: no limit
  std::function<Verdict()> check;
};

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

CanonicalForm sample_case(testing::Gen& gen, int which) {
  switch (which) {
    case 1: return CanonicalForm::trivial(gen.log_uniform(1e-12, 1e12));
    case 2: return CanonicalForm::positive_normal(gen.log_uniform(positive_normal_seed_floor, 1e12));
    case 3: return CanonicalForm::tusi(gen.log_uniform(tusi_i_seed_floor, 1e12));
    case 4: return CanonicalForm::tusi(gen.uniform(0.0, tusi_ii_case_split));
    default: return CanonicalForm::tusi(gen.uniform(tusi_ii_case_split, tusi_constant));
  }
}

// Sampled forms per seed case, with the range endpoints included.
std::vector<CanonicalForm> seed_sweep(int which) {
  testing::Gen gen(1000 + which);
  std::vector<CanonicalForm> out;
  switch (which) {
    case 1: out = {CanonicalForm::trivial(1e-12), CanonicalForm::trivial(1e12)}; break;
    case 2:
      out = {CanonicalForm::positive_normal(positive_normal_seed_floor), CanonicalForm::positive_normal(1e12)};
      break;
    case 3: out = {CanonicalForm::tusi(tusi_i_seed_floor), CanonicalForm::tusi(1e12)}; break;
    case 4: out = {CanonicalForm::tusi(0.0), CanonicalForm::tusi(tusi_ii_case_split)}; break;
    default:
      out = {CanonicalForm::tusi(std::nextafter(tusi_ii_case_split, 1.0)), CanonicalForm::tusi(tusi_constant)};
      break;
  }
  while (out.size() < 10000) out.push_back(sample_case(gen, which));
  return out;
}

Verdict bombelli() {
  Verdict v;
  const GeneralCubic g{1, 0, -15, -4};
  const Canonicalized c = reduce(g);
  const SeedChoice seed = select_seed(c.form);
  const RootEstimate e = newton_iterate(to_cubic(c.form), *seed.x0, 2, 0.0);
  const double x1 = e.trace[1], x2 = e.trace[2];
  const double X1 = back_map(c.chain, x1), X2 = back_map(c.chain, x2);
  const SolveResult r = solve(g);
  std::vector<double> roots;
  for (const auto& root : r.real_roots)
    for (int k = 0; k < root.multiplicity; ++k) roots.push_back(root.value);
  const double s3 = std::sqrt(3.0);
  const std::vector<double> expected = {-2 - s3, -2 + s3, 4};
  double root_err = roots.size() == 3 ? 0.0 : INFINITY;
  for (std::size_t i = 0; i < std::min<std::size_t>(3, roots.size()); ++i)
    root_err = std::max(root_err, std::abs(roots[i] - expected[i]));

  v.pass = c.form.tag == FormTag::tusi_ii && std::abs(c.form.q - 0.0608) <= 0.0005 && *seed.x0 == 1.0 &&
           std::abs(x1 - 0.94) <= 0.005 && std::abs(x2 - 0.93) <= 0.005 && std::abs(X1 - 4.069) <= 0.01 &&
           std::abs(X2 - 4.0025) <= 0.01 && root_err <= 1e-10;
  v.detail = fmt("q=%.6f x0=%g x1=%.5f x2=%.5f X1=%.5f X2=%.5f max root error %.2e", c.form.q, *seed.x0, x1,
                 x2, X1, X2, root_err);
  return v;
}

Verdict iteration_budget() {
  Verdict v;
  double worst = 0.0, at_top = 0.0;
  for (const FormTag tag : {FormTag::trivial, FormTag::positive_normal}) {
    for (int e = 0; e <= 30; e += 6) {
      const double q = std::pow(10.0, e);
      const CanonicalForm f =
          tag == FormTag::trivial ? CanonicalForm::trivial(q) : CanonicalForm::positive_normal(q);
      const GeneralCubic c = to_cubic(f);
      const SeedChoice seed = select_seed(f);
      double x0;
      if (seed.certified) {
        x0 = *seed.x0;
      } else {
        double hi = 1.0;
        while (evaluate(c, hi).value <= 0.0) hi *= 2.0;
        x0 = certified_seed_fallback(c, 0.0, hi);
      }
      const RootEstimate est = newton_iterate(c, x0, 6, 0.0);
      const double theta = oracle::oracle_all_roots(c).reals.front();
      const double err = std::abs(est.value - theta);
      const double bound6 = certified_bound(std::cbrt(q), 6);
      worst = std::max(worst, err);
      if (e == 30) at_top = std::max(at_top, err);
      if (bound6 > 1.1e-9 * std::cbrt(q) / 1e10) v.pass = false;
      if (err > 1.1e-9) v.pass = false;
    }
  }
  v.detail = fmt("B(6) at q=1e30 %.3e; measured |x6 - root| max %.3e, at q=1e30 %.3e", certified_bound(1e10, 6),
                 worst, at_top);
  return v;
}

Verdict seed_sweep_alpha() {
  Verdict v;
  std::string counts;
  for (int which = 1; which <= 5; ++which) {
    int passed = 0;
    const auto forms = seed_sweep(which);
    for (const CanonicalForm& f : forms) {
      const SeedChoice seed = select_seed(f);
      if (static_cast<int>(seed.case_tag) == which && alpha_test(to_cubic(f), *seed.x0).passed) ++passed;
    }
    if (passed != static_cast<int>(forms.size())) v.pass = false;
    counts += fmt("%scase %d %d/%zu", which > 1 ? ", " : "", which, passed, forms.size());
  }
  v.detail = counts;
  return v;
}

Verdict rho_guarantee() {
  testing::Gen gen(4);
  double worst = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double q = gen.log_uniform(1e-30, 1e30);
    const double root = std::cbrt(q);
    worst = std::max(worst, std::abs(rho_q(q) - root) / root);
  }
  return {worst <= 0.05, fmt("max |rho_q - cbrt q| / cbrt q = %.5f over 1e5 samples", worst)};
}

Verdict tusi_intervals() {
  Verdict v;
  testing::Gen gen(5);
  int good = 0;
  const int samples = 1000;
  for (int i = 0; i < samples; ++i) {
    double delta = 0.0;
    while (delta == 0.0) delta = gen.uniform(0.0, 1.0);
    const auto roots = oracle::oracle_all_roots(to_cubic(CanonicalForm::tusi_from_delta(delta)));
    int in[3] = {0, 0, 0};
    for (double r : roots.reals) {
      if (r > -1.0 / 3.0 && r < 0.0) ++in[0];
      if (r > 0.0 && r < 2.0 / 3.0) ++in[1];
      if (r > 2.0 / 3.0 && r < 1.0) ++in[2];
    }
    if (roots.reals.size() == 3 && in[0] == 1 && in[1] == 1 && in[2] == 1) ++good;
  }
  if (good != samples) v.pass = false;

  const CanonicalSolution low = solve_canonical(CanonicalForm::tusi_from_delta(0.0));
  const CanonicalSolution high = solve_canonical(CanonicalForm::tusi_from_delta(1.0));
  const bool low_ok = low.primary.value == 1.0 && low.others.kind == QuadraticRoots::Kind::double_real &&
                      low.others.r1 == 0.0;
  const bool high_ok = high.primary.value == -1.0 / 3.0 && high.others.kind == QuadraticRoots::Kind::double_real &&
                       high.others.r1 == 2.0 / 3.0;
  if (!low_ok || !high_ok) v.pass = false;
  v.detail = fmt("%d/%d deltas with one root per interval; delta=0 -> {0,0,1} %s; delta=1 -> {-1/3,2/3,2/3} %s",
                 good, samples, low_ok ? "ok" : "wrong", high_ok ? "ok" : "wrong");
  return v;
}

Verdict oracle_equivalence() {
  Verdict v;
  testing::Gen gen(6);
  int compared = 0, count_mismatch = 0, value_mismatch = 0, residual_over = 0, simple_roots = 0;
  double worst_err = 0.0, worst_res = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const GeneralCubic g = gen.cubic();
    if (near_multiple_root(depress(g))) continue;
    ++compared;
    const SolveResult r = solve(g);
    std::vector<double> got;
    for (const auto& root : r.real_roots) {
      for (int k = 0; k < root.multiplicity; ++k) got.push_back(root.value);
      if (root.multiplicity == 1) {
        ++simple_roots;
        const double res = testing::normalized_residual(g, root.value);
        worst_res = std::max(worst_res, res);
        if (res > 1e-12) ++residual_over;
      }
    }
    const auto want = oracle::oracle_all_roots(g).reals;
    if (got.size() != want.size()) {
      ++count_mismatch;
      continue;
    }
    bool bad = false;
    for (std::size_t j = 0; j < got.size(); ++j) {
      const double err = testing::scaled_error(got[j], want[j]);
      worst_err = std::max(worst_err, err);
      bad = bad || err > 1e-8;
    }
    value_mismatch += bad;
  }
  v.pass = count_mismatch == 0 && value_mismatch == 0 && residual_over == 0;
  v.detail = fmt("%d cubics compared; root-count mismatches %d, value mismatches %d (max scaled error %.2e); "
                 "residual > 1e-12 for %d of %d simple roots (max %.2e)",
                 compared, count_mismatch, value_mismatch, worst_err, residual_over, simple_roots, worst_res);
  return v;
}

Verdict contraction() {
  Verdict v;
  int traces = 0, violations = 0;
  for (int which = 1; which <= 5; ++which) {
    for (const CanonicalForm& f : seed_sweep(which)) {
      const SeedChoice seed = select_seed(f);
      const RootEstimate e = newton_iterate(to_cubic(f), *seed.x0, iterations_needed(f, seed, default_tolerance),
                                            default_tolerance, bound_scale(f, seed));
      ++traces;
      const double first = std::abs(e.trace[1] - e.trace[0]);
      for (std::size_t k = 1; k + 1 < e.trace.size(); ++k) {
        const double limit = std::pow(0.5, std::exp2(static_cast<double>(k)) - 1) * first;
        if (std::abs(e.trace[k + 1] - e.trace[k]) > limit) {
          ++violations;
          break;
        }
      }
    }
  }
  v.pass = violations == 0;
  v.detail = fmt("%d traces, %d with a step above (1/2)^(2^k - 1) |x1 - x0|", traces, violations);
  return v;
}

Verdict scaling_identity() {
  testing::Gen gen(8);
  double worst = 0.0;
  int orbits = 0;
  for (int k = -5; k <= 5; ++k) {
    for (int i = 0; i < 100; ++i) {
      const double q = gen.uniform(1.0, 10.0) * std::pow(10.0, 3 * k);
      const CubeRootEstimate est = cube_root_estimate(q);
      const RootEstimate x = newton_iterate(GeneralCubic{1, 0, 0, -q}, est.rho_q, 6, 0.0);
      const RootEstimate y = newton_iterate(GeneralCubic{1, 0, 0, -est.parts.m}, est.rho_m, 6, 0.0);
      const std::size_t len = std::max(x.trace.size(), y.trace.size());
      for (std::size_t t = 0; t < len; ++t) {
        const double xt = x.trace[std::min(t, x.trace.size() - 1)];
        const double yt = y.trace[std::min(t, y.trace.size() - 1)];
        worst = std::max(worst, std::abs(xt - est.c_n * yt) / std::abs(xt));
      }
      ++orbits;
    }
  }
  return {worst <= 1e-12, fmt("%d orbits over k = -5..5, max |x_t - c_n y_t| / |x_t| = %.2e", orbits, worst)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "golden example X^3 - 15X - 4", 1.0, bombelli},
      {2, "six-iteration budget up to q = 1e30", 10.0, iteration_budget},
      {3, "seed certification sweep", 1000.0, seed_sweep_alpha},
      {4, "rho_q within five percent", 1000.0, rho_guarantee},
      {5, "Tusi root intervals", 1000.0, tusi_intervals},
      {6, "oracle equivalence and residuals", 10000.0, oracle_equivalence},
      {7, "contraction of certified traces", 0.0, contraction},
      {8, "trivial-form scaling identity", 0.0, scaling_identity},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v = c.check();
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    std::string timing = fmt("%.3f ms", ms);
    if (c.time_limit_ms > 0.0) {
      timing += fmt(" (limit %g ms)", c.time_limit_ms);
      if (ms >= c.time_limit_ms) v.pass = false;
    }
    std::printf("%s criterion %d: %s -- %s [%s]\n", v.pass ? "PASS" : "FAIL", c.id, c.name, v.detail.c_str(),
                timing.c_str());
    failed += !v.pass;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
