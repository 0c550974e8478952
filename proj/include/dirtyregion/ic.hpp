#pragma once

// State-dependent Gaussian interference channel (both cross links).

#include <array>

#include "dirtyregion/channels.hpp"
#include "dirtyregion/region.hpp"
#include "dirtyregion/report.hpp"
#include "dirtyregion/z_ic.hpp"

namespace dirtyregion {

/// D = (P1+1)(P2+1) - a b P1 P2 vanishes: the joint DPC design does not exist.
class SingularCoefficientError : public std::domain_error {
 public:
  SingularCoefficientError(const std::string& what, double ab)
      : std::domain_error(what), ab_(ab) {}
  double ab() const noexcept { return ab_; }

 private:
  double ab_;
};

double ic_vs_determinant(const IcParams& params);

/// Joint DPC coefficients with D as above:
///   alpha1 = P1(1+P2)/D, alpha2 = P1(d + d P2 - a P2)/D,
///   beta1 = -b P1 P2/D,  beta2 = P2(P1 + 1 - b d P1)/D.
IcVeryStrongCoefficients ic_vs_coefficients(const IcParams& params);

/// Cancellation equations in cross-multiplied form; all four vanish for a
/// valid design:
///   alpha1 (d - a beta2) - alpha2 (1 - a beta1)
///   alpha1 (P1 + 1) - P1 (1 - a beta1)
///   beta1 (1 - b alpha2) + b alpha1 beta2
///   beta1 (P2 + 1) + b alpha1 P2
std::array<double, 4> ic_vs_residuals(const IcParams& params,
                                      const IcVeryStrongCoefficients& coeffs);

struct IcVsConditions {
  ConditionReport first;   // h(X1) - h(U,Y2) + h(Y2) >= 1/2 log(1 + P1)
  ConditionReport second;  // h(X2) - h(V,Y1) + h(Y1) >= 1/2 log(1 + P2)
  double first_mi_form = 0.0;   // I(U;Y2) - I(S1,S2;U) - 1/2 log(1 + P1)
  double second_mi_form = 0.0;  // I(V;Y1) - I(S1,S2;V) - 1/2 log(1 + P2)
};

IcVsConditions ic_vs_conditions(const IcParams& params);

/// Entropy-form margin of the first condition only; -inf where the design
/// is singular. Convenient for scans over b.
double ic_vs_first_margin(const IcParams& params);
double ic_vs_second_margin(const IcParams& params);

struct IcVeryStrongResult {
  IcVeryStrongCoefficients coefficients;
  std::array<double, 4> residuals{};
  IcVsConditions conditions;
  double rate1 = 0.0;  // I(U;V,Y1) - I(S1,S2;U)
  double rate2 = 0.0;  // I(V;U,Y2) - I(S1,S2;V)
  bool characterized = false;
  Pentagon region;
};

/// Requires P1 + a^2 P2 + 1 > (1+P1)(1+P2) and b^2 P1 + P2 + 1 > (1+P1)(1+P2).
IcVeryStrongResult ic_vs_capacity(const IcParams& params);
bool ic_vs_gate(const IcParams& params);

/// Strong-regime gate: a, b >= 1 and min of the two sum terms at most
/// (1+P1)(1+P2).
bool ic_strong_gate(const IcParams& params);

/// Relabels the users when P1 + a^2 P2 + 1 > b^2 P1 + P2 + 1.
IcParams ic_strong_orient(const IcParams& params, bool& swapped);

/// Three margins (MI term minus target rate), all >= 0 on pass:
///   I(U1;Y2) - I(U1;S1) - 1/2 log(1 + P1'/(a^2 P2 + P1'' + 1))
///   I(U2;V,Y2|U1) - I(U2;S1|U1) - 1/2 log(1 + P1'')
///   I(V;U1,Y2) - I(V;S1) - 1/2 log(1 + a^2 P2/(P1'' + 1))
/// The report's margin is their minimum; witness holds m1, m2, m3.
StrongPointResult ic_strong_point(const IcParams& params, double P1dd);

StrongSegment ic_strong_segment(const IcParams& params, const SegmentScan& scan = {});

/// Gate |a(1 + b^2 P1)| + |b(1 + a^2 P2)| <= 1, reported rather than thrown.
ConditionReport ic_weak_gate(const IcParams& params);

/// 1/2 log(1 + P1/(a^2 P2 + 1)) + 1/2 log(1 + P2/(b^2 P1 + 1)); throws
/// RegimeGateError when the gate fails.
double ic_weak_sum_capacity(const IcParams& params);

/// Same formula without the gate, for callers supplying their own.
double ic_weak_sum_rate(const IcParams& params);

}  // namespace dirtyregion
