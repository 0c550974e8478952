#include "dirtyregion/mac_helper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dirtyregion/search.hpp"

namespace dirtyregion {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMarginTol = 1e-9;

double beta_limit(const MacHelperParams& p) {
  if (p.Q == 0.0) return kInf;
  return std::sqrt(p.P0 / p.Q);
}

double dpc_power(const MacHelperParams& p, double beta) {
  if (p.Q > 0.0 && std::abs(beta) > beta_limit(p) * (1.0 + 1e-12) + 1e-15)
    throw PowerViolationError("beta outside [-sqrt(P0/Q), sqrt(P0/Q)]");
  return std::max(0.0, p.P0 - beta * beta * p.Q);
}

// Face value used in pentagons and searches: min(f, g) floored at 0.
double face(const MacHelperParams& p, double alpha, double beta, double P) {
  const double v = std::min(f_rate(p, alpha, beta, P), g_rate(p, alpha, beta, P));
  return std::isnan(v) ? 0.0 : std::max(0.0, v);
}

Pentagon no_state_pentagon(const MacHelperParams& p) {
  return {half_log2(1.0 + p.P1), half_log2(1.0 + p.P2), half_log2(1.0 + p.P1 + p.P2)};
}

struct CWitness {
  double alpha = 0.0;
  double margin = -kInf;
};

CWitness best_c_witness(const MacHelperParams& p, double P) {
  if (p.Q == 0.0) return {1.0, c_margin(p, 1.0, P)};
  const double w = beta_limit(p);
  // Canonical witnesses first: direct cancellation and pure DPC.
  if (p.P0 >= p.Q) {
    const double m = c_margin(p, 0.0, P);
    if (m >= -kMarginTol) return {0.0, m};
  }
  {
    const double m = c_margin(p, 1.0, P);
    if (m >= -kMarginTol) return {1.0, m};
  }
  const auto best =
      maximize_1d([&](double a) { return c_margin(p, a, P); }, {1.0 - w, 1.0 + w}, 1e-10, 4096);
  return {best.x, best.value};
}

MacIndexResult classify_index(const MacHelperParams& p, double P, const CWitness& c) {
  MacIndexResult r;
  r.power = P;
  r.c_alpha = c.alpha;
  r.c_margin = c.margin;
  const auto rs = rho_star(p, P);
  r.rho_star = rs.rho;
  r.optimizer = optimal_coefficients(p, P);
  r.f_value = f_rate(p, r.optimizer.alpha, r.optimizer.beta, P);
  r.g_value = g_rate(p, r.optimizer.alpha, r.optimizer.beta, P);
  if (c.margin >= -kMarginTol)
    r.label = MacLabel::C;
  else if (r.f_value <= r.g_value + kMarginTol)
    r.label = MacLabel::A;
  else
    r.label = MacLabel::B;
  return r;
}

}  // namespace

double f_rate(const MacHelperParams& p, double alpha, double beta, double P) {
  p.validate();
  if (p.Q == 0.0) return kInf;
  const double p0p = dpc_power(p, beta);
  const double q = p.Q;
  if (p0p == 0.0) {
    // U = alpha S carries no helper signal; only alpha = 0 keeps f finite.
    if (alpha != 0.0) return -kInf;
    return half_log2(1.0 + P / ((1.0 + beta) * (1.0 + beta) * q + 1.0));
  }
  const double e = alpha - 1.0 - beta;
  const double num = p0p * (p0p + (1.0 + beta) * (1.0 + beta) * q + P + 1.0);
  const double den = p0p * q * e * e + p0p + alpha * alpha * q;
  return half_log2(num / den);
}

double g_rate(const MacHelperParams& p, double alpha, double beta, double P) {
  p.validate();
  if (p.Q == 0.0) return half_log2(1.0 + P);
  const double p0p = dpc_power(p, beta);
  const double q = p.Q;
  if (p0p == 0.0 && alpha == 0.0)
    return half_log2(1.0 + P / ((1.0 + beta) * (1.0 + beta) * q + 1.0));
  const double e = alpha - 1.0 - beta;
  const double signal = p0p + alpha * alpha * q;
  const double den = p0p * q * e * e + signal;
  return half_log2(1.0 + P * signal / den);
}

double outer_first_term(const MacHelperParams& p, double rho, double P) {
  const double cross = 2.0 * rho * std::sqrt(p.P0 * p.Q);
  return half_log2(1.0 + P / (p.Q + cross + p.P0 + 1.0)) +
         half_log2(1.0 + p.P0 - rho * rho * p.P0);
}

RhoStar rho_star(const MacHelperParams& p, double P) {
  p.validate();
  if (p.P0 == 0.0 || p.Q == 0.0) return {0.0, outer_first_term(p, 0.0, P)};
  const auto best =
      maximize_1d([&](double r) { return outer_first_term(p, r, P); }, {-1.0, 1.0}, 1e-10);
  return {best.x, best.value};
}

MacCoefficients optimal_coefficients(const MacHelperParams& p, double P) {
  const auto rs = rho_star(p, P);
  const double beta = p.Q == 0.0 ? 0.0 : rs.rho * std::sqrt(p.P0 / p.Q);
  const double p0p = std::max(0.0, p.P0 - beta * beta * p.Q);
  return {(1.0 + beta) * p0p / (p0p + 1.0), beta};
}

MacOuterPoint outer_point(const MacHelperParams& p, double rho) {
  p.validate();
  return {rho, std::min(outer_first_term(p, rho, p.P1), half_log2(1.0 + p.P1)),
          std::min(outer_first_term(p, rho, p.P2), half_log2(1.0 + p.P2)),
          std::min(outer_first_term(p, rho, p.P1 + p.P2), half_log2(1.0 + p.P1 + p.P2))};
}

RateRegion outer_envelope(const MacHelperParams& p, std::size_t rho_grid, std::size_t r1_grid,
                          ExecPolicy policy) {
  p.validate();
  if (rho_grid < 3) throw ParameterError("outer_envelope needs a rho grid of at least 3 points");
  RateRegion region;
  auto add = [&](double rho) {
    const auto o = outer_point(p, rho);
    region.pentagons.push_back({o.m1, o.m2, o.m12});
  };
  for (double rho : linspace({-1.0, 1.0}, rho_grid)) add(rho);
  for (double P : {p.P1, p.P2, p.P1 + p.P2}) add(rho_star(p, P).rho);
  region.boundary = upper_envelope(region.pentagons, r1_grid, policy);
  return region;
}

Pentagon inner_pentagon(const MacHelperParams& p, double alpha, double beta) {
  return {face(p, alpha, beta, p.P1), face(p, alpha, beta, p.P2),
          face(p, alpha, beta, p.P1 + p.P2)};
}

std::vector<Pentagon> inner_pentagons(const MacHelperParams& p, const InnerGridSpec& grid,
                                      ExecPolicy policy) {
  p.validate();
  if (p.Q == 0.0) return {no_state_pentagon(p)};
  const double w = beta_limit(p);
  const auto alphas = linspace({-w, 2.0 + w}, grid.alpha_points);
  const auto betas = linspace({-w, w}, grid.beta_points);
  auto make = [&](double a, double b) { return inner_pentagon(p, a, b); };
  auto pentagons = policy == ExecPolicy::serial ? pentagon_grid_serial(alphas, betas, make)
                                                : pentagon_grid_parallel(alphas, betas, make);
  if (!grid.refine) return pentagons;

  const std::array<double, 3> powers{p.P1, p.P2, p.P1 + p.P2};
  for (double P : powers) {
    const auto best = maximize_2d([&](double a, double b) { return face(p, a, b, P); },
                                  {-w, 2.0 + w}, {-w, w}, 1e-9, 129, 65, 16);
    pentagons.push_back(inner_pentagon(p, best.x, best.y));
  }
  const auto cls = classify(p);
  for (const auto& r : cls.index) {
    pentagons.push_back(inner_pentagon(p, r.optimizer.alpha, r.optimizer.beta));
    if (r.label == MacLabel::C) {
      const double beta = std::clamp(r.c_alpha - 1.0, -w, w);
      pentagons.push_back(inner_pentagon(p, r.c_alpha, beta));
    }
  }
  return pentagons;
}

double inner_max_face(const MacHelperParams& p, double P) {
  p.validate();
  if (p.Q == 0.0) return half_log2(1.0 + P);
  const double w = beta_limit(p);
  double best = maximize_2d([&](double a, double b) { return face(p, a, b, P); },
                            {-w, 2.0 + w}, {-w, w}, 1e-9, 129, 65, 16)
                    .value;
  const auto k = optimal_coefficients(p, P);
  best = std::max(best, face(p, k.alpha, k.beta, P));
  const auto c = best_c_witness(p, P);
  if (c.margin >= -kMarginTol)
    best = std::max(best, face(p, c.alpha, std::clamp(c.alpha - 1.0, -w, w), P));
  return best;
}

RateRegion inner_envelope(const MacHelperParams& p, const InnerGridSpec& grid,
                          ExecPolicy policy) {
  RateRegion region;
  region.pentagons = inner_pentagons(p, grid, policy);
  region.boundary = upper_envelope(region.pentagons, grid.r1_points, policy);
  return region;
}

double c_margin(const MacHelperParams& p, double alpha, double P) {
  const double d = alpha - 1.0;
  const double p0p = p.P0 - d * d * p.Q;
  return p0p * p0p - alpha * alpha * p.Q * (P + 1.0 - p0p);
}

char label_char(MacLabel label) {
  switch (label) {
    case MacLabel::A: return 'A';
    case MacLabel::B: return 'B';
    case MacLabel::C: return 'C';
  }
  return '?';
}

int case_id(MacLabel l1, MacLabel l2, MacLabel l3) {
  if (l3 == MacLabel::C) return (l1 == MacLabel::C && l2 == MacLabel::C) ? 19 : 0;
  return static_cast<int>(l1) * 6 + static_cast<int>(l2) * 2 + (l3 == MacLabel::B ? 1 : 0) + 1;
}

MacClassification classify(const MacHelperParams& p) {
  p.validate();
  const std::array<double, 3> powers{p.P1, p.P2, p.P1 + p.P2};
  std::array<CWitness, 3> c;
  for (int k = 0; k < 3; ++k) c[k] = best_c_witness(p, powers[k]);
  // The margin decreases in P, so the sum witness also serves each user;
  // reusing it keeps C3 => C1 and C2 exact.
  for (int k = 0; k < 2; ++k) {
    const double m = c_margin(p, c[2].alpha, powers[k]);
    if (c[k].margin < -kMarginTol && m > c[k].margin) c[k] = {c[2].alpha, m};
  }
  MacClassification out;
  for (int k = 0; k < 3; ++k) out.index[k] = classify_index(p, powers[k], c[k]);
  const auto l1 = out.index[0].label, l2 = out.index[1].label, l3 = out.index[2].label;
  out.case_id = case_id(l1, l2, l3);
  out.case_name = std::string{label_char(l1), '1', '-', label_char(l2), '2', '-',
                              label_char(l3), '3'};
  return out;
}

FullCapacityResult full_capacity_check(const MacHelperParams& p) {
  p.validate();
  const double P = p.P1 + p.P2;
  const auto c = best_c_witness(p, P);
  FullCapacityResult out;
  out.report.condition = "P0'^2 >= alpha^2 Q (P1 + P2 + 1 - P0') for some alpha in the window";
  out.report.margin = c.margin;
  out.report.pass = c.margin >= -kMarginTol;
  out.report.witness["alpha"] = c.alpha;
  out.report.witness["beta"] = c.alpha - 1.0;
  if (p.Q == 0.0) out.report.notes.push_back("no state: the condition holds trivially");
  if (out.report.pass) out.region = no_state_pentagon(p);
  return out;
}

SegmentReport capacity_segments(const MacHelperParams& p) {
  SegmentReport out;
  out.classification = classify(p);
  const char* faces[] = {"R1", "R2", "R1+R2"};
  for (int k = 0; k < 3; ++k) {
    const auto& r = out.classification.index[k];
    Segment s;
    s.face = faces[k];
    s.label = r.label;
    switch (r.label) {
      case MacLabel::A:
        s.value = r.f_value;
        s.characterized = true;
        break;
      case MacLabel::C:
        s.value = half_log2(1.0 + r.power);
        s.characterized = true;
        break;
      case MacLabel::B:
        s.value = NAN;
        break;
    }
    out.segments[k] = s;
  }
  return out;
}

}  // namespace dirtyregion
