#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dirtyregion/search.hpp"
#include "dirtyregion/z_ic.hpp"

using namespace dirtyregion;

namespace {

ZicParams random_very_strong(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> p(0.1, 5.0), q(0.1, 4.0), r(-1.0, 1.0), s(1.01, 4.0);
  ZicParams z{0, p(rng), p(rng), q(rng), q(rng), r(rng)};
  z.a = s(rng) * std::sqrt(1.0 + z.P1);
  return z;
}

ZicParams random_strong(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> p(0.1, 5.0), q(0.1, 4.0), r(-1.0, 1.0), u(0.0, 1.0);
  ZicParams z{0, p(rng), p(rng), q(rng), q(rng), r(rng)};
  z.a = std::sqrt(1.0 + u(rng) * 0.999 * z.P1);
  return z;
}

}  // namespace

TEST(ZicVeryStrong, CoefficientSpecialCases) {
  const ZicParams indep{3.0, 2.0, 1.5, 1.0, 1.0, 0.0};
  const auto k = zic_vs_coefficients(indep);
  EXPECT_NEAR(k.alpha1, -(2.0 / 3.0) * 3.0 * 1.5 / 2.5, 1e-15);
  EXPECT_NEAR(k.alpha2, 2.0 / 3.0, 1e-15);
  EXPECT_NEAR(k.beta, 1.5 / 2.5, 1e-15);
  const ZicParams no_link{0.0, 2.0, 1.5, 2.0, 0.5, 0.6};
  const double d = 0.6 * std::sqrt(2.0 / 0.5);
  EXPECT_NEAR(zic_vs_coefficients(no_link).alpha1, d * 2.0 / 3.0, 1e-15);
}

TEST(ZicVeryStrong, CancellationIdentitiesWhenConditionHolds) {
  std::mt19937_64 rng(21);
  int passing = 0;
  for (int t = 0; t < 400 && passing < 40; ++t) {
    const auto p = random_very_strong(rng);
    const auto r = zic_vs_capacity(p);
    if (!r.characterized) continue;
    ++passing;
    EXPECT_NEAR(r.rate1, half_log2(1.0 + p.P1), 1e-9);
    EXPECT_NEAR(r.rate2, half_log2(1.0 + p.P2), 1e-9);
    EXPECT_DOUBLE_EQ(r.region.m1, half_log2(1.0 + p.P1));
  }
  EXPECT_GE(passing, 20);
}

TEST(ZicVeryStrong, CorrectedClosedFormAgreesInSign) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 300; ++t) {
    const auto p = random_very_strong(rng);
    const auto c = zic_vs_condition(p);
    if (std::abs(c.report.margin) < 1e-6) continue;
    EXPECT_EQ(c.corrected_margin >= 0.0, c.report.pass);
  }
}

TEST(ZicVeryStrong, PrintedBracketIsFlaggedWhenItDisagrees) {
  std::mt19937_64 rng(23);
  int flagged = 0;
  for (int t = 0; t < 300; ++t) {
    const auto c = zic_vs_condition(random_very_strong(rng));
    if (c.formula_discrepancy) {
      ++flagged;
      EXPECT_NE(c.closed_form_margin >= 0.0, c.report.pass);
      EXPECT_FALSE(c.report.notes.empty());
    }
  }
  EXPECT_GT(flagged, 0);
}

TEST(ZicVeryStrong, GateIsStrict) {
  EXPECT_THROW(zic_vs_capacity({std::sqrt(3.0), 2.0, 2.0, 1.0, 1.0, 0.0}), RegimeGateError);
  EXPECT_NO_THROW(zic_vs_capacity({1.8, 2.0, 2.0, 1.0, 1.0, 0.0}));
}

TEST(ZicVeryStrong, LargeGainLimit) {
  // Far from the flip at Q2 = (1 + P2)/P2 the verdict is stable.
  const double a = 1e3;
  EXPECT_NE(zic_vs_condition({a, 2, 2, 1, 1.0, 0}).report.pass,
            zic_vs_condition({a, 2, 2, 1, 3.0, 0}).report.pass);
}

TEST(ZicStrong, SumRateIdentity) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    const auto p = random_strong(rng);
    const auto r = strong_rates(p.a, p.P1, p.P2, make_split(p.P1, u(rng) * p.P1));
    EXPECT_NEAR(r.r1 + r.r2, half_log2(1.0 + p.P1 + p.a * p.a * p.P2), 1e-12);
    EXPECT_NEAR(r.r1, r.r1_layer1 + r.r1_layer2, 1e-15);
  }
}

TEST(ZicStrong, CoefficientFormula) {
  const auto s = make_split(1.0, 0.3);
  const auto k = strong_coefficients(1.2, 1.0, 1.0, s);
  const double T = 1.0 + 1.44 + 1.0;
  EXPECT_NEAR(k.alpha1, 0.7 / T, 1e-15);
  EXPECT_NEAR(k.alpha2, 0.3 / T, 1e-15);
  EXPECT_NEAR(k.beta, 1.44 / T, 1e-15);
}

TEST(ZicStrong, DesignDeliversTargetRatesAtReceiverOne) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const auto p = random_strong(rng);
    const auto r = zic_strong_point(p, u(rng) * p.P1);
    EXPECT_NEAR(r.achieved_u1, r.rates.r1_layer1, 1e-9);
    EXPECT_NEAR(r.achieved_u2, r.rates.r1_layer2, 1e-9);
    EXPECT_NEAR(r.achieved_v, r.rates.r2, 1e-9);
  }
}

TEST(ZicStrong, CornerPointRates) {
  const ZicParams p{1.2, 1.0, 1.0, 2.0, 1.0, 0.5};
  const auto r = zic_strong_point(p, 1.2 * 1.2 - 1.0);
  EXPECT_NEAR(r.rates.r1, half_log2(1.72), 1e-9);
  EXPECT_NEAR(r.rates.r2, 0.5, 1e-9);
  const auto e = zic_strong_point(p, 1.0);
  EXPECT_NEAR(e.rates.r1, 0.5, 1e-12);
}

TEST(ZicStrong, ClosedFormAgreesInSign) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    const auto p = random_strong(rng);
    const auto r = zic_strong_point(p, u(rng) * p.P1);
    if (!std::isfinite(r.closed_form_margin) || std::abs(r.condition.margin) < 1e-6) continue;
    EXPECT_EQ(r.closed_form_margin >= 0.0, r.condition.pass);
  }
}

TEST(ZicStrong, SegmentHasPrefixStructure) {
  std::mt19937_64 rng(34);
  for (int t = 0; t < 40; ++t) {
    const auto p = random_strong(rng);
    const auto s = zic_strong_segment(p, {129, 1e-8});
    EXPECT_TRUE(s.prefix_property);
    if (s.empty) {
      EXPECT_TRUE(s.passing.empty());
      continue;
    }
    EXPECT_DOUBLE_EQ(s.p1dd_hi, p.P1);
    EXPECT_TRUE(zic_strong_point(p, s.p1dd_lo).condition.pass);
    ASSERT_FALSE(s.passing.empty());
    EXPECT_NEAR(s.passing.back().lo, s.p1dd_lo, 1e-7);
  }
}

TEST(ZicStrong, HighlyCorrelatedStatesGiveASegment) {
  const ZicParams p{1.2, 1.0, 1.0, 2.0, 1.0, 0.99};
  const auto s = zic_strong_segment(p);
  EXPECT_FALSE(s.empty);
  EXPECT_NEAR(s.to.r1, 0.5, 1e-12);
  EXPECT_NEAR(s.from.r1 + s.from.r2, half_log2(1.0 + 1.0 + 1.44), 1e-12);
  const std::size_t n = zic_strong_pass_count(p, 101);
  std::size_t direct = 0;
  for (double x : linspace({0.44, 1.0}, 101)) direct += zic_strong_point(p, x).condition.pass;
  EXPECT_EQ(n, direct);
}

TEST(ZicStrong, GateAndSplitErrors) {
  EXPECT_THROW(zic_strong_point({0.9, 1, 1, 1, 1, 0}, 0.5), RegimeGateError);
  EXPECT_THROW(zic_strong_point({1.5, 1, 1, 1, 1, 0}, 0.5), RegimeGateError);
  EXPECT_THROW(zic_strong_point({1.2, 1, 1, 1, 1, 0}, 1.5), ParameterError);
}

TEST(ZicWeak, SumCapacity) {
  EXPECT_NEAR(zic_weak_sum_capacity({0.0, 1.0, 3.0, 1, 1, 0}), half_log2(2.0) + half_log2(4.0),
              1e-15);
  EXPECT_NEAR(zic_weak_sum_capacity({1.0, 1.0, 1.0, 1, 1, 0}), 0.792481250360578, 1e-12);
  const double base = zic_weak_sum_capacity({0.5, 2.0, 1.0, 1, 2, 0.0});
  for (double rho : {-0.9, 0.9}) EXPECT_EQ(zic_weak_sum_capacity({0.5, 2.0, 1.0, 1, 2, rho}), base);
  EXPECT_THROW(zic_weak_sum_capacity({2.0, 1, 1, 1, 1, 0}), RegimeGateError);
}
