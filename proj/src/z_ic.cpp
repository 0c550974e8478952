#include "dirtyregion/z_ic.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "dirtyregion/strong_scan.hpp"

namespace dirtyregion {

namespace {

constexpr double kSignTol = 1e-6;

double log_ratio_margin(double lhs, double rhs) {
  if (!(lhs > 0.0) || !(rhs > 0.0) || !std::isfinite(rhs)) return NAN;
  return half_log2(lhs) - half_log2(rhs);
}

// Published very-strong closed form with the sign of the a*beta term
// selectable: +1 reproduces the printed bracket, -1 the corrected one.
double vs_closed_form(const ZicParams& p, double sign) {
  const auto dec = forward_split(p.Q1, p.Q2, p.rho);
  const double d = dec.coefficient, q1p = dec.residual_variance;
  const double beta = p.P2 / (p.P2 + 1.0);
  const double e = d + sign * p.a * beta;
  const double num = p.P1 + p.a * p.a * p.P2 + d * d * p.Q2 + q1p + 1.0;
  const double den = e * e * p.Q2 * p.P2 + (p.P2 + beta * beta * p.Q2) * (p.P1 + q1p + 1.0);
  if (p.P2 == 0.0) return NAN;
  return log_ratio_margin(num / den, (p.P2 + 1.0) / p.P2);
}

const VarList kStates{"S1p", "S2"};

}  // namespace

ZicVeryStrongCoefficients zic_vs_coefficients(const ZicParams& p) {
  p.validate();
  const double d = forward_split(p.Q1, p.Q2, p.rho).coefficient;
  const double beta = p.P2 / (p.P2 + 1.0);
  const double k = p.P1 / (p.P1 + 1.0);
  return {k * (d - p.a * beta), k, beta};
}

ZicVsCondition zic_vs_condition(const ZicParams& p) {
  const auto sys = build_zic_verystrong(p, zic_vs_coefficients(p));
  ZicVsCondition out;
  out.report.condition = "I(V;Y2) <= I(V;Y1)";
  out.report.margin = model_mi(sys, {"V"}, {"Y1"}) - model_mi(sys, {"V"}, {"Y2"});
  out.report.pass = out.report.margin >= 0.0;
  out.closed_form_margin = vs_closed_form(p, +1.0);
  out.corrected_margin = vs_closed_form(p, -1.0);
  out.formula_discrepancy = false;
  if (std::isfinite(out.closed_form_margin) && std::abs(out.report.margin) > kSignTol &&
      (out.closed_form_margin >= 0.0) != out.report.pass) {
    out.formula_discrepancy = true;
    out.report.notes.push_back(
        "published closed form disagrees with the covariance margin; the (d - a beta) form "
        "agrees");
  }
  if (p.P2 == 0.0) out.report.notes.push_back("P2 = 0: closed form undefined");
  return out;
}

ZicVeryStrongResult zic_vs_capacity(const ZicParams& p) {
  p.validate();
  if (!(p.a * p.a > 1.0 + p.P1))
    throw RegimeGateError("very strong regime requires a^2 > 1 + P1");
  ZicVeryStrongResult out;
  out.coefficients = zic_vs_coefficients(p);
  out.decomposition = forward_split(p.Q1, p.Q2, p.rho);
  out.condition = zic_vs_condition(p);
  const auto sys = build_zic_verystrong(p, out.coefficients);
  out.rate1 = model_mi(sys, {"U"}, {"V", "Y1"}) - model_mi(sys, kStates, {"U"});
  out.rate2 = model_mi(sys, {"V"}, {"Y2"}) - model_mi(sys, {"S2"}, {"V"});
  out.characterized = out.condition.report.pass;
  if (out.characterized) {
    const double m1 = half_log2(1.0 + p.P1), m2 = half_log2(1.0 + p.P2);
    out.region = {m1, m2, m1 + m2};
  }
  return out;
}

void check_zic_strong_gate(const ZicParams& p) {
  p.validate();
  const double a2 = p.a * p.a;
  if (!(a2 >= 1.0 && a2 < 1.0 + p.P1))
    throw RegimeGateError("strong regime requires 1 <= a^2 < 1 + P1");
}

StrongLayeredCoefficients strong_coefficients(double a, double P1, double P2,
                                              const PowerSplit& split) {
  const double total = P1 + a * a * P2 + 1.0;
  return {split.P1p / total, split.P1dd / total, a * a * P2 / total};
}

StrongRates strong_rates(double a, double P1, double P2, const PowerSplit& split) {
  (void)P1;
  StrongRates r;
  const double a2p2 = a * a * P2;
  r.r1_layer1 = half_log2(1.0 + split.P1p / (a2p2 + split.P1dd + 1.0));
  r.r1_layer2 = half_log2(1.0 + split.P1dd);
  r.r1 = r.r1_layer1 + r.r1_layer2;
  r.r2 = half_log2(1.0 + a2p2 / (split.P1dd + 1.0));
  return r;
}

namespace detail {

StrongPointResult strong_point_common(const IcParams& p, double P1dd, StrongModel model) {
  StrongPointResult out;
  out.split = make_split(p.P1, P1dd);
  out.coefficients = strong_coefficients(p.a, p.P1, p.P2, out.split);
  out.rates = strong_rates(p.a, p.P1, p.P2, out.split);
  const auto sys = build_strong_layered(p, out.split, out.coefficients, model);
  out.achieved_u1 = model_mi(sys, {"U1"}, {"Y1"}) - model_mi(sys, {"U1"}, {"S1"});
  out.achieved_u2 =
      model_mi(sys, {"U2"}, {"V", "Y1"}, {"U1"}) - model_mi(sys, {"U2"}, {"S1"}, {"U1"});
  out.achieved_v = model_mi(sys, {"V"}, {"U1", "Y1"}) - model_mi(sys, {"V"}, {"S1"});
  out.closed_form_margin = NAN;
  return out;
}

StrongSegment scan_segment(const std::function<double(double)>& margin, double lo, double hi,
                           const IcParams& p, const SegmentScan& scan) {
  StrongSegment seg;
  const auto grid = linspace({lo, hi}, scan.points);
  auto pass = [&](double x) {
    const double m = margin(x);
    return std::isfinite(m) && m >= 0.0;
  };
  // Walk from P1'' = P1 toward the other end of the line.
  std::size_t first_fail = grid.size();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const std::size_t i = grid.size() - 1 - k;
    const bool ok = pass(grid[i]);
    if (!ok && first_fail == grid.size()) first_fail = k;
    if (ok && first_fail != grid.size()) seg.prefix_property = false;
  }
  if (first_fail > 0) {
    seg.empty = false;
    seg.p1dd_hi = hi;
    if (first_fail == grid.size()) {
      seg.p1dd_lo = lo;
    } else {
      const std::size_t fail_i = grid.size() - 1 - first_fail;
      seg.p1dd_lo = bisect_boundary(margin, grid[fail_i], grid[fail_i + 1], scan.resolution);
    }
    const auto r_lo = strong_rates(p.a, p.P1, p.P2, make_split(p.P1, seg.p1dd_lo));
    const auto r_hi = strong_rates(p.a, p.P1, p.P2, make_split(p.P1, seg.p1dd_hi));
    seg.from = {r_lo.r1, r_lo.r2};
    seg.to = {r_hi.r1, r_hi.r2};
  }
  seg.passing = satisfied_intervals(margin, {lo, hi}, scan.points, scan.resolution);
  return seg;
}

}  // namespace detail

StrongPointResult zic_strong_point(const ZicParams& p, double P1dd) {
  check_zic_strong_gate(p);
  const IcParams ip{p.a, 0.0, p.P1, p.P2, p.Q1, p.Q2, p.rho};
  auto out = detail::strong_point_common(ip, P1dd, StrongModel::zic);
  const auto sys = build_strong_layered(ip, out.split, out.coefficients, StrongModel::zic);
  out.condition.condition = "I(V;U1,Y1) <= I(V;Y2)";
  out.condition.margin = model_mi(sys, {"V"}, {"Y2"}) - model_mi(sys, {"V"}, {"U1", "Y1"});
  out.condition.pass = out.condition.margin >= 0.0;
  out.condition.witness["P1dd"] = P1dd;

  const auto dec = backward_split(p.Q1, p.Q2, p.rho);
  const double c = dec.coefficient, q2p = dec.residual_variance;
  const double a2p2 = p.a * p.a * p.P2;
  const double beta = out.coefficients.beta;
  const double e = p.a * c - beta;
  const double lhs = a2p2 * (p.P2 + c * c * p.Q1 + q2p + 1.0) /
                     (e * e * p.Q1 * p.P2 + (a2p2 + beta * beta * p.Q1) * (q2p + 1.0));
  out.closed_form_margin = log_ratio_margin(lhs, 1.0 + a2p2 / (P1dd + 1.0));
  if (std::isfinite(out.closed_form_margin) && std::abs(out.condition.margin) > kSignTol &&
      (out.closed_form_margin >= 0.0) != out.condition.pass)
    out.condition.notes.push_back("closed form disagrees in sign with the covariance margin");
  return out;
}

StrongSegment zic_strong_segment(const ZicParams& p, const SegmentScan& scan) {
  check_zic_strong_gate(p);
  const double lo = p.a * p.a - 1.0;
  auto margin = [&](double x) { return zic_strong_point(p, x).condition.margin; };
  const IcParams ip{p.a, 0.0, p.P1, p.P2, p.Q1, p.Q2, p.rho};
  return detail::scan_segment(margin, lo, p.P1, ip, scan);
}

std::size_t zic_strong_pass_count(const ZicParams& p, std::size_t points) {
  check_zic_strong_gate(p);
  std::size_t n = 0;
  for (double x : linspace({p.a * p.a - 1.0, p.P1}, points))
    if (zic_strong_point(p, x).condition.pass) ++n;
  return n;
}

double zic_weak_sum_capacity(const ZicParams& p) {
  p.validate();
  if (!(p.a * p.a <= 1.0)) throw RegimeGateError("weak regime requires a^2 <= 1");
  return half_log2(1.0 + p.P1 / (p.a * p.a * p.P2 + 1.0)) + half_log2(1.0 + p.P2);
}

}  // namespace dirtyregion
