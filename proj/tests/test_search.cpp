#include <gtest/gtest.h>

#include <cmath>

#include "dirtyregion/search.hpp"

using namespace dirtyregion;

TEST(Search, LinspaceEndpointsAreExact) {
  const auto xs = linspace({-1.0, 0.3}, 7);
  ASSERT_EQ(xs.size(), 7u);
  EXPECT_EQ(xs.front(), -1.0);
  EXPECT_EQ(xs.back(), 0.3);
  EXPECT_EQ(linspace({2.0, 2.0}, 5).size(), 1u);
}

TEST(Search, Maximize1dFindsParabolaPeak) {
  const auto m = maximize_1d([](double x) { return -(x - 0.3137) * (x - 0.3137) + 2.0; },
                             {-1.0, 1.0}, 1e-10);
  EXPECT_NEAR(m.x, 0.3137, 1e-6);
  EXPECT_NEAR(m.value, 2.0, 1e-12);
}

TEST(Search, Maximize1dHandlesEndpointMaximum) {
  const auto m = maximize_1d([](double x) { return x; }, {0.0, 3.0});
  EXPECT_DOUBLE_EQ(m.x, 3.0);
}

TEST(Search, Maximize1dNeverBelowGrid) {
  // Narrow spike the golden section cannot see on its own.
  auto f = [](double x) { return std::exp(-1e4 * (x - 0.5) * (x - 0.5)) + 0.1 * x; };
  const auto m = maximize_1d(f, {0.0, 1.0}, 1e-8, 1025);
  for (double x : linspace({0.0, 1.0}, 1025)) EXPECT_GE(m.value, f(x));
}

TEST(Search, Maximize1dRejectsNonFinite) {
  EXPECT_THROW(maximize_1d([](double) { return NAN; }, {0.0, 1.0}), NonFiniteObjectiveError);
}

TEST(Search, Maximize2dSeparableQuadratic) {
  const auto m = maximize_2d(
      [](double x, double y) { return -(x - 0.2) * (x - 0.2) - 2 * (y + 0.4) * (y + 0.4); },
      {-1, 1}, {-1, 1}, 1e-10);
  EXPECT_NEAR(m.x, 0.2, 1e-5);
  EXPECT_NEAR(m.y, -0.4, 1e-5);
}

TEST(Search, BisectReturnsPassingSide) {
  auto margin = [](double x) { return 1.0 - x; };  // passes for x <= 1
  const double b = bisect_boundary(margin, 0.0, 3.0, 1e-9);
  EXPECT_LE(b, 1.0);
  EXPECT_NEAR(b, 1.0, 1e-8);
  const double r = bisect_boundary([](double x) { return x - 1.0; }, 0.0, 3.0, 1e-9);
  EXPECT_GE(r, 1.0);
  EXPECT_NEAR(r, 1.0, 1e-8);
}

TEST(Search, SatisfiedIntervalsOfCosine) {
  const auto iv = satisfied_intervals([](double x) { return std::cos(x); }, {0.0, 12.0}, 121,
                                      1e-10);
  ASSERT_EQ(iv.size(), 3u);
  const double pi = std::acos(-1.0);
  EXPECT_EQ(iv[0].lo, 0.0);
  EXPECT_NEAR(iv[0].hi, pi / 2, 1e-9);
  EXPECT_NEAR(iv[1].lo, 1.5 * pi, 1e-9);
  EXPECT_NEAR(iv[1].hi, 2.5 * pi, 1e-9);
  EXPECT_NEAR(iv[2].lo, 3.5 * pi, 1e-9);
  EXPECT_EQ(iv[2].hi, 12.0);
}

TEST(Search, NonFiniteMarginsFail) {
  const auto iv = satisfied_intervals(
      [](double x) { return x < 0.5 ? -INFINITY : NAN; }, {0.0, 1.0}, 11);
  EXPECT_TRUE(iv.empty());
}
