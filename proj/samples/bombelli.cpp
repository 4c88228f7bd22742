// Solves Bombelli's cubic X^3 - 15X - 4 and prints the Newton orbit in both
// the canonical and the original variable.

#include <cstdio>

#include "tusi/tusi.hpp"

int main() {
  const tusi::GeneralCubic bombelli{1.0, 0.0, -15.0, -4.0};
  const tusi::SolveResult r = tusi::solve(bombelli);

  std::printf("canonical form %s, q = %.6f\n", tusi::to_string(r.canonical.tag).data(),
              r.canonical.q);
  for (std::size_t t = 0; t < r.primary_estimate.trace.size(); ++t) {
    const double x = r.primary_estimate.trace[t];
    std::printf("  x_%zu = %.10f   X_%zu = %.10f\n", t, x, t, tusi::back_map(r.chain, x));
  }
  for (const auto& root : r.real_roots)
    std::printf("root %.15f (bound %.2e)\n", root.value, root.error_bound);
  return 0;
}
