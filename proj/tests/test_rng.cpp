#include <gtest/gtest.h>

#include <brwp/rng.hpp>

#include <cmath>
#include <set>

namespace {

TEST(Rng, PureFunctionOfArguments) {
  double a = brwp::rng::normal(42, 3, 1000);
  double b = brwp::rng::normal(42, 3, 1000);
  EXPECT_EQ(a, b);
}

TEST(Rng, StreamsAndCountersDecorrelate) {
  EXPECT_NE(brwp::rng::word(1, 0, 0), brwp::rng::word(1, 1, 0));
  EXPECT_NE(brwp::rng::word(1, 0, 0), brwp::rng::word(1, 0, 1));
  EXPECT_NE(brwp::rng::word(1, 0, 0), brwp::rng::word(2, 0, 0));
}

TEST(Rng, UniformsLieInHalfOpenUnitInterval) {
  for (std::uint64_t c = 0; c < 10000; ++c) {
    double u = brwp::rng::uniform01(7, 0, c);
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Rng, UniformMomentsMatch) {
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int c = 0; c < n; ++c) {
    double u = brwp::rng::uniform01(123, 5, c);
    s += u;
    s2 += u * u;
  }
  double mean = s / n;
  double var = s2 / n - mean * mean;
  EXPECT_NEAR(mean, 0.5, 5e-3);        // std err ~ 6e-4
  EXPECT_NEAR(var, 1.0 / 12.0, 5e-3);  // std err ~ 6e-4
}

TEST(Rng, NormalMomentsMatch) {
  const int n = 200000;
  double s = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (int c = 0; c < n; ++c) {
    double z = brwp::rng::normal(99, 2, c);
    s += z;
    s2 += z * z;
    s3 += z * z * z;
    s4 += z * z * z * z;
  }
  EXPECT_NEAR(s / n, 0.0, 0.01);       // std err ~ 2e-3
  EXPECT_NEAR(s2 / n, 1.0, 0.02);      // std err ~ 3e-3
  EXPECT_NEAR(s3 / n, 0.0, 0.05);      // std err ~ 6e-3
  EXPECT_NEAR(s4 / n, 3.0, 0.15);      // std err ~ 2e-2
}

TEST(Rng, NoShortCycleAcrossCounters) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t c = 0; c < 100000; ++c) {
    seen.insert(brwp::rng::word(0, 0, c));
  }
  EXPECT_EQ(seen.size(), 100000u);
}

}  // namespace
