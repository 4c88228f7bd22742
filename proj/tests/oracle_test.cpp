#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"
#include "tusi/oracle.hpp"
#include "tusi/solver.hpp"

namespace tusi {
namespace {

TEST(BisectRoot, Examples) {
  EXPECT_NEAR(oracle::bisect_root({1, 0, 0, -2}, 1, 2, 1e-10), 1.2599210499, 1e-10);
  EXPECT_NEAR(oracle::bisect_root({1, -1, 0, 2.0 / 27.0}, 0, 2.0 / 3.0, 1e-10), 1.0 / 3.0, 1e-10);
  EXPECT_NEAR(oracle::bisect_root({1, 0, 0, -8}, 1, 3, 1e-12), 2.0, 1e-12);
}

TEST(BisectRoot, Deterministic) {
  const double a = oracle::bisect_root({1, 0, 0, -2}, 1, 2, 1e-10);
  const double b = oracle::bisect_root({1, 0, 0, -2}, 1, 2, 1e-10);
  EXPECT_EQ(a, b);
}

TEST(BisectRoot, Errors) {
  try {
    oracle::bisect_root({1, 0, 0, -8}, 3, 4, 1e-12);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::no_sign_change);
  }
  EXPECT_THROW(oracle::bisect_root({1, 0, 0, -8}, 3, 1, 1e-12), error);
  EXPECT_THROW(oracle::bisect_root({1, 0, 0, -8}, 1, 3, 0), error);
}

TEST(AllRoots, Bombelli) {
  const auto r = oracle::oracle_all_roots({1, 0, -15, -4});
  ASSERT_EQ(r.reals.size(), 3u);
  EXPECT_NEAR(r.reals[0], -3.7320508, 1e-7);
  EXPECT_NEAR(r.reals[1], -0.2679492, 1e-7);
  EXPECT_NEAR(r.reals[2], 4.0, 1e-12);
  EXPECT_FALSE(r.complex_pair);
}

TEST(AllRoots, ComplexPair) {
  const auto r = oracle::oracle_all_roots({1, 0, 1, -2});
  ASSERT_EQ(r.reals.size(), 1u);
  EXPECT_NEAR(r.reals[0], 1.0, 1e-14);
  ASSERT_TRUE(r.complex_pair);
  EXPECT_NEAR(r.complex_pair->re, -0.5, 1e-14);
  EXPECT_NEAR(r.complex_pair->im, 1.3228757, 1e-7);
  EXPECT_TRUE(r.cardano_checked);
  EXPECT_TRUE(r.cardano_agrees);
}

TEST(AllRoots, DoubleRoot) {
  const auto r = oracle::oracle_all_roots({1, -1, 0, 0});
  ASSERT_EQ(r.reals.size(), 3u);
  EXPECT_EQ(r.reals[0], 0.0);
  EXPECT_EQ(r.reals[1], 0.0);
  EXPECT_EQ(r.reals[2], 1.0);
}

TEST(AllRoots, TripleRoot) {
  const auto r = oracle::oracle_all_roots({1, 0, 0, 0});
  ASSERT_EQ(r.reals.size(), 3u);
  for (double x : r.reals) EXPECT_EQ(x, 0.0);
}

TEST(AllRoots, TotalMultiplicityThreeAndSorted) {
  testing::Gen gen(61);
  for (int i = 0; i < 10000; ++i) {
    const GeneralCubic g = gen.cubic();
    const auto r = oracle::oracle_all_roots(g);
    EXPECT_EQ(r.reals.size() + (r.complex_pair ? 2 : 0), 3u);
    EXPECT_TRUE(std::is_sorted(r.reals.begin(), r.reals.end()));
  }
}

// Synthetic division at a reported root leaves a remainder small against the
// size of the terms it cancels.
TEST(AllRoots, DeflationRemainderSmall) {
  testing::Gen gen(62);
  for (int i = 0; i < 10000; ++i) {
    const GeneralCubic g = gen.cubic();
    if (near_multiple_root(depress(g))) continue;
    for (double root : oracle::oracle_all_roots(g).reals) {
      const long double x = root;
      const long double b2 = static_cast<long double>(g.a2) / g.a3;
      const long double b1 = static_cast<long double>(g.a1) / g.a3;
      const long double b0 = static_cast<long double>(g.a0) / g.a3;
      const long double remainder = ((x + b2) * x + b1) * x + b0;
      const long double scale = std::abs(x * x * x) + std::abs(b2 * x * x) + std::abs(b1 * x) + std::abs(b0);
      EXPECT_LE(std::abs(remainder), 1e-9L * scale) << g.a3 << ' ' << g.a2 << ' ' << g.a1 << ' ' << g.a0;
    }
  }
}

TEST(AllRoots, CardanoAgreesOnSingleRealRoot) {
  testing::Gen gen(63);
  int checked = 0;
  for (int i = 0; i < 10000; ++i) {
    const DepressedCubic d{gen.signed_log_uniform(1e-3, 1e6), gen.signed_log_uniform(1e-3, 1e6)};
    if (!(discriminant(d) < 0.0) || near_multiple_root(d)) continue;
    const auto r = oracle::oracle_all_roots(to_general(d));
    ASSERT_TRUE(r.cardano_checked);
    ++checked;
    EXPECT_LE(r.cardano_deviation, 1e-8) << "p=" << d.p << " q=" << d.q;
    EXPECT_TRUE(r.cardano_agrees);
  }
  EXPECT_GT(checked, 1000);
}

}  // namespace
}  // namespace tusi
