#include "dirtyregion/ic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dirtyregion/strong_scan.hpp"

namespace dirtyregion {

namespace {

constexpr double kDetTol = 1e-12;
const VarList kStates{"S1p", "S2"};

}  // namespace

double ic_vs_determinant(const IcParams& p) {
  return (p.P1 + 1.0) * (p.P2 + 1.0) - p.a * p.b * p.P1 * p.P2;
}

IcVeryStrongCoefficients ic_vs_coefficients(const IcParams& p) {
  p.validate();
  const double D = ic_vs_determinant(p);
  if (std::abs(D) <= kDetTol)
    throw SingularCoefficientError("joint DPC design is singular at ab = " +
                                       std::to_string(p.a * p.b),
                                   p.a * p.b);
  const double d = forward_split(p.Q1, p.Q2, p.rho).coefficient;
  return {p.P1 * (1.0 + p.P2) / D, p.P1 * (d + d * p.P2 - p.a * p.P2) / D,
          -p.b * p.P1 * p.P2 / D, p.P2 * (p.P1 + 1.0 - p.b * d * p.P1) / D};
}

std::array<double, 4> ic_vs_residuals(const IcParams& p, const IcVeryStrongCoefficients& k) {
  const double d = forward_split(p.Q1, p.Q2, p.rho).coefficient;
  return {k.alpha1 * (d - p.a * k.beta2) - k.alpha2 * (1.0 - p.a * k.beta1),
          k.alpha1 * (p.P1 + 1.0) - p.P1 * (1.0 - p.a * k.beta1),
          k.beta1 * (1.0 - p.b * k.alpha2) + p.b * k.alpha1 * k.beta2,
          k.beta1 * (p.P2 + 1.0) + p.b * k.alpha1 * p.P2};
}

IcVsConditions ic_vs_conditions(const IcParams& p) {
  const auto sys = build_ic_verystrong(p, ic_vs_coefficients(p));
  const double t1 = half_log2(1.0 + p.P1), t2 = half_log2(1.0 + p.P2);
  IcVsConditions out;
  out.first.condition = "h(X1) - h(U,Y2) + h(Y2) >= 1/2 log(1 + P1)";
  out.first.margin = entropy_bits(sys, {"X1"}) - entropy_bits(sys, {"U", "Y2"}) +
                     entropy_bits(sys, {"Y2"}) - t1;
  out.first.pass = out.first.margin >= 0.0;
  out.second.condition = "h(X2) - h(V,Y1) + h(Y1) >= 1/2 log(1 + P2)";
  out.second.margin = entropy_bits(sys, {"X2"}) - entropy_bits(sys, {"V", "Y1"}) +
                      entropy_bits(sys, {"Y1"}) - t2;
  out.second.pass = out.second.margin >= 0.0;
  out.first_mi_form = model_mi(sys, {"U"}, {"Y2"}) - model_mi(sys, kStates, {"U"}) - t1;
  out.second_mi_form = model_mi(sys, {"V"}, {"Y1"}) - model_mi(sys, kStates, {"V"}) - t2;
  // Absolute agreement in bits, relaxed only when the terms themselves are
  // huge (near a singular design).
  const double scale = std::max({1.0, std::abs(out.first.margin), std::abs(out.second.margin)});
  const double gap = std::max(std::abs(out.first.margin - out.first_mi_form),
                              std::abs(out.second.margin - out.second_mi_form));
  if (gap > 1e-9 * scale)
    throw NumericError("entropy and mutual-information forms differ by " + std::to_string(gap) +
                       " bits");
  return out;
}

double ic_vs_first_margin(const IcParams& p) {
  try {
    return ic_vs_conditions(p).first.margin;
  } catch (const SingularCoefficientError&) {
    return -std::numeric_limits<double>::infinity();
  } catch (const SingularCovarianceError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

double ic_vs_second_margin(const IcParams& p) {
  try {
    return ic_vs_conditions(p).second.margin;
  } catch (const SingularCoefficientError&) {
    return -std::numeric_limits<double>::infinity();
  } catch (const SingularCovarianceError&) {
    return -std::numeric_limits<double>::infinity();
  }
}

bool ic_vs_gate(const IcParams& p) {
  const double prod = (1.0 + p.P1) * (1.0 + p.P2);
  return p.P1 + p.a * p.a * p.P2 + 1.0 > prod && p.b * p.b * p.P1 + p.P2 + 1.0 > prod;
}

IcVeryStrongResult ic_vs_capacity(const IcParams& p) {
  p.validate();
  if (!ic_vs_gate(p))
    throw RegimeGateError(
        "very strong regime requires P1 + a^2 P2 + 1 and b^2 P1 + P2 + 1 to exceed "
        "(1 + P1)(1 + P2)");
  IcVeryStrongResult out;
  out.coefficients = ic_vs_coefficients(p);
  out.residuals = ic_vs_residuals(p, out.coefficients);
  out.conditions = ic_vs_conditions(p);
  const auto sys = build_ic_verystrong(p, out.coefficients);
  out.rate1 = model_mi(sys, {"U"}, {"V", "Y1"}) - model_mi(sys, kStates, {"U"});
  out.rate2 = model_mi(sys, {"V"}, {"U", "Y2"}) - model_mi(sys, kStates, {"V"});
  out.characterized = out.conditions.first.pass && out.conditions.second.pass;
  if (out.characterized) {
    const double m1 = half_log2(1.0 + p.P1), m2 = half_log2(1.0 + p.P2);
    out.region = {m1, m2, m1 + m2};
  }
  return out;
}

bool ic_strong_gate(const IcParams& p) {
  const double prod = (1.0 + p.P1) * (1.0 + p.P2);
  const double s1 = p.P1 + p.a * p.a * p.P2 + 1.0, s2 = p.b * p.b * p.P1 + p.P2 + 1.0;
  return p.a >= 1.0 && p.b >= 1.0 && std::min(s1, s2) <= prod;
}

IcParams ic_strong_orient(const IcParams& p, bool& swapped) {
  swapped = p.P1 + p.a * p.a * p.P2 + 1.0 > p.b * p.b * p.P1 + p.P2 + 1.0;
  if (!swapped) return p;
  return {p.b, p.a, p.P2, p.P1, p.Q2, p.Q1, p.rho};
}

namespace {

IcParams strong_prepare(const IcParams& p, bool& swapped) {
  p.validate();
  if (!ic_strong_gate(p))
    throw RegimeGateError(
        "strong regime requires a, b >= 1 and min(P1 + a^2 P2 + 1, b^2 P1 + P2 + 1) <= "
        "(1 + P1)(1 + P2)");
  return ic_strong_orient(p, swapped);
}

StrongPointResult oriented_point(const IcParams& q, double P1dd) {
  auto out = detail::strong_point_common(q, P1dd, StrongModel::ic);
  const auto sys = build_strong_layered(q, out.split, out.coefficients, StrongModel::ic);
  const double m1 =
      model_mi(sys, {"U1"}, {"Y2"}) - model_mi(sys, {"U1"}, {"S1"}) - out.rates.r1_layer1;
  const double m2 = model_mi(sys, {"U2"}, {"V", "Y2"}, {"U1"}) -
                    model_mi(sys, {"U2"}, {"S1"}, {"U1"}) - out.rates.r1_layer2;
  const double m3 =
      model_mi(sys, {"V"}, {"U1", "Y2"}) - model_mi(sys, {"V"}, {"S1"}) - out.rates.r2;
  out.condition.condition = "receiver 2 decodes U1, U2 and V at the receiver-1 design rates";
  out.condition.margin = std::min({m1, m2, m3});
  out.condition.pass = out.condition.margin >= 0.0;
  out.condition.witness = {{"P1dd", P1dd}, {"m1", m1}, {"m2", m2}, {"m3", m3}};
  return out;
}

}  // namespace

StrongPointResult ic_strong_point(const IcParams& p, double P1dd) {
  bool swapped = false;
  const auto q = strong_prepare(p, swapped);
  auto out = oriented_point(q, P1dd);
  out.swapped = swapped;
  if (swapped) out.condition.notes.push_back("users relabelled so that P1 + a^2 P2 + 1 is smaller");
  return out;
}

StrongSegment ic_strong_segment(const IcParams& p, const SegmentScan& scan) {
  bool swapped = false;
  const auto q = strong_prepare(p, swapped);
  const double lo = std::max(0.0, q.a * q.a - 1.0);
  auto margin = [&](double x) { return oriented_point(q, x).condition.margin; };
  auto seg = detail::scan_segment(margin, lo, q.P1, q, scan);
  seg.swapped = swapped;
  return seg;
}

ConditionReport ic_weak_gate(const IcParams& p) {
  ConditionReport r;
  r.condition = "|a(1 + b^2 P1)| + |b(1 + a^2 P2)| <= 1";
  const double lhs = std::abs(p.a * (1.0 + p.b * p.b * p.P1)) +
                     std::abs(p.b * (1.0 + p.a * p.a * p.P2));
  r.margin = 1.0 - lhs;
  r.pass = lhs <= 1.0;
  return r;
}

double ic_weak_sum_rate(const IcParams& p) {
  p.validate();
  return half_log2(1.0 + p.P1 / (p.a * p.a * p.P2 + 1.0)) +
         half_log2(1.0 + p.P2 / (p.b * p.b * p.P1 + 1.0));
}

double ic_weak_sum_capacity(const IcParams& p) {
  p.validate();
  if (!ic_weak_gate(p).pass) throw RegimeGateError("weak regime gate fails");
  return ic_weak_sum_rate(p);
}

}  // namespace dirtyregion
