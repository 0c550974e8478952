#pragma once

// State-dependent Gaussian MAC with a state-aware helper: outer bound,
// single-bin DPC inner bound, and the A/B/C segment classification.

#include <array>
#include <string>

#include "dirtyregion/channels.hpp"
#include "dirtyregion/region.hpp"
#include "dirtyregion/report.hpp"

namespace dirtyregion {

/// Inner-bound rate functions with P0' = P0 - beta^2 Q. `P` is the power of
/// the user (or users) being decoded. With Q = 0, f is +inf and g is the
/// no-state rate.
double f_rate(const MacHelperParams& params, double alpha, double beta, double P);
double g_rate(const MacHelperParams& params, double alpha, double beta, double P);

/// First term of the outer bound at helper-state correlation rho.
double outer_first_term(const MacHelperParams& params, double rho, double P);

struct RhoStar {
  double rho = 0.0;
  double value = 0.0;
};

/// Maximiser of outer_first_term over [-1, 1]; rho = 0 when P0 = 0 or Q = 0.
RhoStar rho_star(const MacHelperParams& params, double P);

/// beta_k = rho* sqrt(P0/Q), alpha_k = (1 + beta_k) P0' / (P0' + 1).
MacCoefficients optimal_coefficients(const MacHelperParams& params, double P);

struct MacOuterPoint {
  double rho = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
  double m12 = 0.0;
};

MacOuterPoint outer_point(const MacHelperParams& params, double rho);

RateRegion outer_envelope(const MacHelperParams& params, std::size_t rho_grid = 257,
                          std::size_t r1_grid = 513, ExecPolicy policy = ExecPolicy::parallel);

struct InnerGridSpec {
  std::size_t alpha_points = 257;
  std::size_t beta_points = 129;
  std::size_t r1_points = 513;
  bool refine = true;
};

/// Pentagon of the inner bound at one (alpha, beta); negative faces are
/// clipped to 0.
Pentagon inner_pentagon(const MacHelperParams& params, double alpha, double beta);

/// Grid pentagons plus refined maximisers of each face and the theorem's
/// witness designs. No envelope is computed.
std::vector<Pentagon> inner_pentagons(const MacHelperParams& params, const InnerGridSpec& grid = {},
                                      ExecPolicy policy = ExecPolicy::parallel);

/// Largest inner-bound face value min(f, g)(P) over (alpha, beta): a
/// refined 2-D search combined with the theorem's witness designs.
double inner_max_face(const MacHelperParams& params, double P);

RateRegion inner_envelope(const MacHelperParams& params, const InnerGridSpec& grid = {},
                          ExecPolicy policy = ExecPolicy::parallel);

/// P0'^2 - alpha^2 Q (P + 1 - P0') with P0' = P0 - (alpha - 1)^2 Q.
double c_margin(const MacHelperParams& params, double alpha, double P);

enum class MacLabel { A, B, C };
char label_char(MacLabel label);

struct MacIndexResult {
  MacLabel label = MacLabel::B;
  double power = 0.0;
  double c_margin = 0.0;      // best margin over the alpha window
  double c_alpha = 0.0;       // where it is attained
  double rho_star = 0.0;
  MacCoefficients optimizer;  // (alpha_k, beta_k)
  double f_value = 0.0;       // f and g at the optimizer
  double g_value = 0.0;
};

struct MacClassification {
  std::array<MacIndexResult, 3> index;  // R1, R2, R1 + R2
  int case_id = 0;                      // 1..19 in the order of the case table
  std::string case_name;                // e.g. "C1-C2-A3"
};

MacClassification classify(const MacHelperParams& params);

/// Case number (1..19) for a label triple; 0 for an incoherent triple.
int case_id(MacLabel l1, MacLabel l2, MacLabel l3);

struct FullCapacityResult {
  ConditionReport report;
  Pentagon region;  // the no-state MAC pentagon when the check passes
};

FullCapacityResult full_capacity_check(const MacHelperParams& params);

struct Segment {
  std::string face;   // "R1", "R2", "R1+R2"
  MacLabel label = MacLabel::B;
  double value = 0.0;  // NaN when uncharacterized
  bool characterized = false;
};

struct SegmentReport {
  MacClassification classification;
  std::array<Segment, 3> segments;
};

SegmentReport capacity_segments(const MacHelperParams& params);

}  // namespace dirtyregion
