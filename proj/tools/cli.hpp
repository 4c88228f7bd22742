#pragma once

// Command-line front end: solve, canonical, seed, bench.
//
//   tusi solve [--json] [--trace] [--tol T] [--max-iter N] [--out FILE] -- a3 a2 a1 a0
//   tusi canonical [--json] -- a3 a2 a1 a0
//   tusi seed Q [--form trivial|positive_normal|tusi_i|tusi_ii] [--tol T] [--json]
//   tusi bench [--count N] [--rng-seed S] [--tol T] [--json]
//
// Exit codes: 0 success, 2 invalid input or usage, 3 non-convergence or an
// uncertified result.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tusi/oracle.hpp"
#include "tusi/tusi.hpp"

namespace tusi::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_invalid = 2;
inline constexpr int exit_uncertified = 3;

using json = nlohmann::json;

namespace detail {

inline std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

inline json step_json(const TransformStep& step) {
  return std::visit(
      [](const auto& st) -> json {
        using S = std::decay_t<decltype(st)>;
        if constexpr (std::is_same_v<S, Translate>) return {{"type", "translate"}, {"value", st.alpha}};
        else if constexpr (std::is_same_v<S, Scale>) return {{"type", "scale"}, {"value", st.s}};
        else if constexpr (std::is_same_v<S, Negate>) return {{"type", "negate"}, {"value", nullptr}};
        else return {{"type", "invert_scale"}, {"value", st.c}};
      },
      step);
}

inline json canonical_json(const CanonicalForm& f) {
  return {{"form", std::string(to_string(f.tag))},
          {"q", f.q},
          {"delta", f.delta ? json(*f.delta) : json(nullptr)}};
}

inline GeneralCubic cubic_from(const std::vector<double>& coeffs) {
  return {coeffs[0], coeffs[1], coeffs[2], coeffs[3]};
}

inline void print_chain(std::ostream& out, const TransformChain& chain) {
  out << "transform chain (original -> canonical):\n";
  for (const auto& step : chain.steps) out << "  " << describe(step) << '\n';
  out << "  leading scale " << num(chain.leading_scale) << '\n';
}

/// Signs uniform, magnitudes log-uniform in [1e-3, 1e6].
inline GeneralCubic random_cubic(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> exponent(-3.0, 6.0);
  std::bernoulli_distribution negative(0.5);
  auto coefficient = [&] {
    const double v = std::pow(10.0, exponent(rng));
    return negative(rng) ? -v : v;
  };
  GeneralCubic g;
  g.a3 = coefficient();
  g.a2 = coefficient();
  g.a1 = coefficient();
  g.a0 = coefficient();
  return g;
}

}  // namespace detail

struct SolveArgs {
  std::vector<double> coefficients;
  double tol = default_tolerance;
  int max_iter = default_max_iterations;
  bool json = false;
  bool trace = false;
  std::string out_path;
};

inline json solve_json(const SolveResult& r, bool with_trace) {
  json roots = json::array();
  for (const auto& root : r.real_roots)
    roots.push_back(
        {{"value", root.value}, {"multiplicity", root.multiplicity}, {"error_bound", root.error_bound}});
  json doc;
  doc["roots"] = roots;
  doc["complex_pair"] =
      r.complex_pair ? json{{"re", r.complex_pair->re}, {"im", r.complex_pair->im}} : json(nullptr);
  doc["canonical"] = detail::canonical_json(r.canonical);
  doc["iterations"] = r.primary_estimate.iterations;
  doc["certified"] = r.certified;
  doc["trace"] = with_trace ? json(r.primary_estimate.trace) : json(nullptr);
  return doc;
}

inline int run_solve(const SolveArgs& a, std::ostream& out, std::ostream& err) {
  const GeneralCubic g = detail::cubic_from(a.coefficients);
  SolveResult r;
  try {
    r = solve(g, a.tol, a.max_iter);
  } catch (const iteration_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_uncertified;
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == errc::invalid_input ? exit_invalid : exit_uncertified;
  }

  if (a.json || !a.out_path.empty()) {
    const std::string doc = solve_json(r, a.trace).dump(2);
    if (!a.out_path.empty()) {
      std::ofstream file(a.out_path);
      if (!file) {
        err << "error: cannot write " << a.out_path << '\n';
        return exit_invalid;
      }
      file << doc << '\n';
    }
    if (a.json) out << doc << '\n';
  }
  if (!a.json) {
    for (const auto& root : r.real_roots)
      out << "root " << detail::num(root.value) << "  multiplicity " << root.multiplicity
          << "  error_bound " << detail::num(root.error_bound) << '\n';
    if (r.complex_pair)
      out << "complex pair " << detail::num(r.complex_pair->re) << " +- "
          << detail::num(r.complex_pair->im) << "i\n";
    out << "canonical " << to_string(r.canonical.tag) << "  q " << detail::num(r.canonical.q);
    if (r.canonical.delta) out << "  delta " << detail::num(*r.canonical.delta);
    out << '\n';
    out << "iterations " << r.primary_estimate.iterations << "  certified "
        << (r.certified ? "yes" : "no") << "  converged " << (r.converged ? "yes" : "no") << '\n';
    if (a.trace) {
      out << "trace (canonical variable):";
      for (double v : r.primary_estimate.trace) out << ' ' << detail::num(v);
      out << '\n';
      detail::print_chain(out, r.chain);
    }
  }
  return r.certified && r.converged ? exit_ok : exit_uncertified;
}

inline int run_canonical(const std::vector<double>& coeffs, bool as_json, std::ostream& out) {
  const Canonicalized c = reduce(detail::cubic_from(coeffs));
  if (as_json) {
    json doc = detail::canonical_json(c.form);
    json steps = json::array();
    for (const auto& s : c.chain.steps) steps.push_back(detail::step_json(s));
    doc["steps"] = steps;
    doc["leading_scale"] = c.chain.leading_scale;
    out << doc.dump(2) << '\n';
    return exit_ok;
  }
  out << "form " << to_string(c.form.tag) << "\nq " << detail::num(c.form.q) << '\n';
  if (c.form.delta) out << "delta " << detail::num(*c.form.delta) << '\n';
  detail::print_chain(out, c.chain);
  return exit_ok;
}

struct SeedArgs {
  double q = 0.0;
  std::string form = "trivial";
  double tol = default_tolerance;
  bool json = false;
};

inline int run_seed(const SeedArgs& a, std::ostream& out, std::ostream& err) {
  const auto tag = form_from_string(a.form);
  if (!tag) {
    err << "error: unknown form '" << a.form << "'\n";
    return exit_invalid;
  }
  CanonicalForm f = *tag == FormTag::trivial         ? CanonicalForm::trivial(a.q)
                    : *tag == FormTag::positive_normal ? CanonicalForm::positive_normal(a.q)
                                                       : CanonicalForm::tusi(a.q);
  if (!is_valid(f) || f.tag != *tag) {
    err << "error: q = " << detail::num(a.q) << " is outside the " << a.form << " range\n";
    return exit_invalid;
  }

  const SeedChoice seed = select_seed(f);
  json doc;
  doc["form"] = a.form;
  doc["q"] = a.q;
  if (a.q > 0.0) {
    const CubeRootEstimate est = cube_root_estimate(a.q);
    doc["m"] = est.parts.m;
    doc["n"] = est.parts.n;
    doc["rho_m"] = est.rho_m;
    doc["c_n"] = est.c_n;
    doc["rho_q"] = est.rho_q;
  } else {
    doc["m"] = doc["n"] = doc["rho_m"] = doc["c_n"] = doc["rho_q"] = nullptr;
  }
  doc["case"] = seed.case_tag == SeedCase::fallback ? json("fallback")
                                                    : json(static_cast<int>(seed.case_tag));
  doc["seed"] = seed.x0 ? json(*seed.x0) : json(nullptr);
  doc["certified"] = seed.certified;
  doc["iterations"] = seed.certified ? json(iterations_needed(f, seed, a.tol)) : json(nullptr);
  doc["tol"] = a.tol;

  if (a.json) {
    out << doc.dump(2) << '\n';
  } else {
    for (const char* key : {"form", "q", "m", "n", "rho_m", "c_n", "rho_q", "case", "seed",
                            "certified", "iterations", "tol"}) {
      const json& v = doc[key];
      out << key << ' ';
      if (v.is_number_float()) out << detail::num(v.get<double>());
      else if (v.is_string()) out << v.get<std::string>();
      else out << v.dump();
      out << '\n';
    }
    if (a.q > 0.0 && seed.certified && f.tag != FormTag::tusi_ii)
      out << "rho_q = 10^" << (doc["n"].get<int>() - ((doc["n"].get<int>() % 3) + 3) % 3) / 3
          << " * cbrt(10)^" << ((doc["n"].get<int>() % 3) + 3) % 3 << " * "
          << detail::num(doc["rho_m"].get<double>()) << '\n';
  }
  return seed.certified ? exit_ok : exit_uncertified;
}

struct BenchArgs {
  int count = 1000;
  std::uint64_t rng_seed = 42;
  double tol = default_tolerance;
  bool json = false;
};

struct BenchStats {
  int cubics = 0;
  int compared = 0;
  int skipped_degenerate = 0;
  int mismatched_counts = 0;
  int unconverged = 0;
  double max_root_error = 0.0;  // |solve - oracle| / max(1, |oracle|)
  double mean_root_error = 0.0;
  double max_residual = 0.0;  // |P(r)| / (|a3| (1 + |r|)^3)
  double mean_residual = 0.0;
};

inline BenchStats run_bench_stats(const BenchArgs& a) {
  std::mt19937_64 rng(a.rng_seed);
  BenchStats s;
  std::size_t root_samples = 0;
  double err_sum = 0.0;
  double res_sum = 0.0;
  for (int i = 0; i < a.count; ++i) {
    const GeneralCubic g = detail::random_cubic(rng);
    ++s.cubics;
    if (near_multiple_root(depress(g))) {
      ++s.skipped_degenerate;
      continue;
    }
    const SolveResult r = solve(g, a.tol);
    if (!r.converged) ++s.unconverged;
    const auto expected = oracle::oracle_all_roots(g);
    std::vector<double> got;
    for (const auto& root : r.real_roots)
      for (int k = 0; k < root.multiplicity; ++k) got.push_back(root.value);
    ++s.compared;
    if (got.size() != expected.reals.size()) {
      ++s.mismatched_counts;
      continue;
    }
    for (std::size_t j = 0; j < got.size(); ++j) {
      const double e = std::abs(got[j] - expected.reals[j]) / std::max(1.0, std::abs(expected.reals[j]));
      const double res = std::abs(evaluate(g, got[j]).value) /
                         (std::abs(g.a3) * std::pow(1.0 + std::abs(got[j]), 3));
      s.max_root_error = std::max(s.max_root_error, e);
      s.max_residual = std::max(s.max_residual, res);
      err_sum += e;
      res_sum += res;
      ++root_samples;
    }
  }
  if (root_samples > 0) {
    s.mean_root_error = err_sum / static_cast<double>(root_samples);
    s.mean_residual = res_sum / static_cast<double>(root_samples);
  }
  return s;
}

inline int run_bench(const BenchArgs& a, std::ostream& out) {
  const BenchStats s = run_bench_stats(a);
  if (a.json) {
    json doc = {{"cubics", s.cubics},
                {"compared", s.compared},
                {"skipped_degenerate", s.skipped_degenerate},
                {"mismatched_counts", s.mismatched_counts},
                {"unconverged", s.unconverged},
                {"max_root_error", s.max_root_error},
                {"mean_root_error", s.mean_root_error},
                {"max_residual", s.max_residual},
                {"mean_residual", s.mean_residual},
                {"rng_seed", a.rng_seed}};
    out << doc.dump(2) << '\n';
  } else {
    out << "cubics " << s.cubics << "  compared " << s.compared << "  skipped (near-multiple) "
        << s.skipped_degenerate << '\n'
        << "root-count mismatches " << s.mismatched_counts << "  unconverged " << s.unconverged
        << '\n'
        << "root error  max " << detail::num(s.max_root_error) << "  mean "
        << detail::num(s.mean_root_error) << '\n'
        << "residual    max " << detail::num(s.max_residual) << "  mean "
        << detail::num(s.mean_residual) << '\n';
  }
  return s.unconverged == 0 && s.mismatched_counts == 0 ? exit_ok : exit_uncertified;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Certified real cubic solver"};
  app.require_subcommand(1);

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Solve a3 x^3 + a2 x^2 + a1 x + a0 = 0");
  solve_cmd->add_option("coefficients", solve_args.coefficients, "a3 a2 a1 a0")
      ->expected(4)
      ->required();
  solve_cmd->add_option("--tol", solve_args.tol, "Newton tolerance")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-iter", solve_args.max_iter, "Newton iteration cap")
      ->check(CLI::Range(1, 1000000));
  solve_cmd->add_flag("--json", solve_args.json, "JSON output");
  solve_cmd->add_flag("--trace", solve_args.trace, "Include the Newton trace and transform chain");
  solve_cmd->add_option("--out", solve_args.out_path, "Write the JSON document to a file");

  std::vector<double> canonical_coeffs;
  bool canonical_json = false;
  auto* canonical_cmd = app.add_subcommand("canonical", "Show the canonical form and transforms");
  canonical_cmd->add_option("coefficients", canonical_coeffs, "a3 a2 a1 a0")->expected(4)->required();
  canonical_cmd->add_flag("--json", canonical_json, "JSON output");

  SeedArgs seed_args;
  auto* seed_cmd = app.add_subcommand("seed", "Inspect the seed for a canonical parameter q");
  seed_cmd->add_option("q", seed_args.q, "canonical parameter")->required();
  seed_cmd->add_option("--form", seed_args.form, "trivial|positive_normal|tusi_i|tusi_ii");
  seed_cmd->add_option("--tol", seed_args.tol, "tolerance for the iteration budget")
      ->check(CLI::PositiveNumber);
  seed_cmd->add_flag("--json", seed_args.json, "JSON output");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Compare the solver with the bisection oracle");
  bench_cmd->add_option("--count", bench_args.count, "number of random cubics")
      ->check(CLI::Range(1, 100000000));
  bench_cmd->add_option("--rng-seed", bench_args.rng_seed, "generator seed");
  bench_cmd->add_option("--tol", bench_args.tol, "Newton tolerance")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--json", bench_args.json, "JSON output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return exit_invalid;
  }

  try {
    if (*solve_cmd) {
      require_valid(detail::cubic_from(solve_args.coefficients));
      return run_solve(solve_args, out, err);
    }
    if (*canonical_cmd) {
      require_valid(detail::cubic_from(canonical_coeffs));
      return run_canonical(canonical_coeffs, canonical_json, out);
    }
    if (*seed_cmd) {
      if (!std::isfinite(seed_args.q)) throw error(errc::invalid_input, "q must be finite");
      return run_seed(seed_args, out, err);
    }
    return run_bench(bench_args, out);
  } catch (const error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == errc::invalid_input || e.code() == errc::domain ? exit_invalid
                                                                       : exit_uncertified;
  }
}

}  // namespace tusi::cli
