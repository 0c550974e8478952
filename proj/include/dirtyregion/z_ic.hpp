#pragma once

// State-dependent Gaussian Z-interference channel: very strong, strong and
// weak interference regimes.

#include <vector>

#include "dirtyregion/channels.hpp"
#include "dirtyregion/region.hpp"
#include "dirtyregion/report.hpp"
#include "dirtyregion/search.hpp"

namespace dirtyregion {

/// alpha1 = P1/(P1+1) (d - a P2/(P2+1)), alpha2 = P1/(P1+1), beta = P2/(P2+1).
ZicVeryStrongCoefficients zic_vs_coefficients(const ZicParams& params);

struct ZicVsCondition {
  ConditionReport report;       // margin = I(V;Y1) - I(V;Y2)
  double closed_form_margin;    // published closed form, bracket term (d + a beta)
  double corrected_margin;      // same closed form with (d - a beta)
  bool formula_discrepancy;     // published form disagrees in sign with the margin
};

ZicVsCondition zic_vs_condition(const ZicParams& params);

struct ZicVeryStrongResult {
  ZicVeryStrongCoefficients coefficients;
  StateDecomposition decomposition;
  ZicVsCondition condition;
  double rate1 = 0.0;  // I(U;V,Y1) - I(S1,S2;U)
  double rate2 = 0.0;  // I(V;Y2) - I(S2;V)
  bool characterized = false;
  Pentagon region;     // the interference-free rectangle when characterized
};

/// Requires a^2 > 1 + P1 (RegimeGateError otherwise).
ZicVeryStrongResult zic_vs_capacity(const ZicParams& params);

/// Throws RegimeGateError unless 1 <= a^2 < 1 + P1.
void check_zic_strong_gate(const ZicParams& params);

/// alpha1 = P1'/(P1 + a^2 P2 + 1), alpha2 = P1''/(P1 + a^2 P2 + 1),
/// beta = a^2 P2/(P1 + a^2 P2 + 1).
StrongLayeredCoefficients strong_coefficients(double a, double P1, double P2,
                                              const PowerSplit& split);

/// Rates of the sum-capacity point reached with layer powers (P1', P1'').
struct StrongRates {
  double r1_layer1 = 0.0;  // 1/2 log(1 + P1'/(a^2 P2 + P1'' + 1))
  double r1_layer2 = 0.0;  // 1/2 log(1 + P1'')
  double r1 = 0.0;
  double r2 = 0.0;         // 1/2 log(1 + a^2 P2/(P1'' + 1))
};
StrongRates strong_rates(double a, double P1, double P2, const PowerSplit& split);

struct StrongPointResult {
  PowerSplit split;
  StrongLayeredCoefficients coefficients;
  StrongRates rates;
  ConditionReport condition;
  /// Rates delivered at receiver 1 by the design, one per layer (U1, U2, V);
  /// each should equal the corresponding target rate.
  double achieved_u1 = 0.0;
  double achieved_u2 = 0.0;
  double achieved_v = 0.0;
  double closed_form_margin = 0.0;  // Z-channel closed form, NaN for the IC
  bool swapped = false;             // IC only: users relabelled
};

/// Condition I(V;U1,Y1) <= I(V;Y2); margin = I(V;Y2) - I(V;U1,Y1).
StrongPointResult zic_strong_point(const ZicParams& params, double P1dd);

/// Characterised part of the sum-capacity line in terms of P1''. The
/// passing range always ends at P1'' = P1 when non-empty.
struct StrongSegment {
  bool empty = true;
  double p1dd_lo = 0.0;
  double p1dd_hi = 0.0;
  RatePoint from;  // rates at p1dd_lo
  RatePoint to;    // rates at p1dd_hi
  std::vector<Interval> passing;  // every passing P1'' interval found by the scan
  bool prefix_property = true;    // no pass beyond the first fail when leaving P1'' = P1
  bool swapped = false;
};

struct SegmentScan {
  std::size_t points = 513;
  double resolution = 1e-8;
};

StrongSegment zic_strong_segment(const ZicParams& params, const SegmentScan& scan = {});

/// Number of passing points among `points` evenly spaced P1'' values on
/// [a^2 - 1, P1].
std::size_t zic_strong_pass_count(const ZicParams& params, std::size_t points);

/// 1/2 log(1 + P1/(a^2 P2 + 1)) + 1/2 log(1 + P2); requires a^2 <= 1.
double zic_weak_sum_capacity(const ZicParams& params);

}  // namespace dirtyregion
