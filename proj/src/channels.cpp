#include "dirtyregion/channels.hpp"

#include <cmath>

namespace dirtyregion {

namespace {

void require_nonnegative(double v, const char* name) {
  if (!(v >= 0.0) || !std::isfinite(v))
    throw ParameterError(std::string(name) + " must be finite and nonnegative");
}

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ParameterError(std::string(name) + " must be finite");
}

void require_correlation(double rho) {
  if (!(std::abs(rho) <= 1.0)) throw ParameterError("rho must lie in [-1, 1]");
}

// (1 - rho^2) Q, clipped at zero so |rho| = 1 gives an exact zero residual.
double residual(double rho, double q) { return std::max(0.0, (1.0 - rho * rho) * q); }

}  // namespace

void MacHelperParams::validate() const {
  require_nonnegative(P0, "P0");
  require_nonnegative(P1, "P1");
  require_nonnegative(P2, "P2");
  require_nonnegative(Q, "Q");
}

void ZicParams::validate() const {
  require_finite(a, "a");
  require_nonnegative(P1, "P1");
  require_nonnegative(P2, "P2");
  require_nonnegative(Q1, "Q1");
  require_nonnegative(Q2, "Q2");
  require_correlation(rho);
}

void IcParams::validate() const {
  require_finite(a, "a");
  require_finite(b, "b");
  require_nonnegative(P1, "P1");
  require_nonnegative(P2, "P2");
  require_nonnegative(Q1, "Q1");
  require_nonnegative(Q2, "Q2");
  require_correlation(rho);
}

StateDecomposition decompose_forward(double Q1, double Q2, double rho) {
  require_nonnegative(Q1, "Q1");
  require_nonnegative(Q2, "Q2");
  require_correlation(rho);
  if (Q2 == 0.0)
    throw ParameterError(
        "forward decomposition needs Q2 > 0; with a deterministic S2 use the independent-state "
        "path (forward_split)");
  return {DecompositionForm::forward, rho * std::sqrt(Q1 / Q2), residual(rho, Q1)};
}

StateDecomposition decompose_backward(double Q1, double Q2, double rho) {
  require_nonnegative(Q1, "Q1");
  require_nonnegative(Q2, "Q2");
  require_correlation(rho);
  if (Q1 == 0.0)
    throw ParameterError(
        "backward decomposition needs Q1 > 0; with a deterministic S1 use the independent-state "
        "path (backward_split)");
  return {DecompositionForm::backward, rho * std::sqrt(Q2 / Q1), residual(rho, Q2)};
}

StateDecomposition forward_split(double Q1, double Q2, double rho) {
  if (Q2 == 0.0) {
    require_nonnegative(Q1, "Q1");
    require_correlation(rho);
    return {DecompositionForm::forward, 0.0, Q1};
  }
  return decompose_forward(Q1, Q2, rho);
}

StateDecomposition backward_split(double Q1, double Q2, double rho) {
  if (Q1 == 0.0) {
    require_nonnegative(Q2, "Q2");
    require_correlation(rho);
    return {DecompositionForm::backward, 0.0, Q2};
  }
  return decompose_backward(Q1, Q2, rho);
}

PowerSplit make_split(double P1, double P1dd) {
  if (!(P1dd >= 0.0) || !(P1dd <= P1))
    throw ParameterError("power split requires 0 <= P1'' <= P1");
  return {P1 - P1dd, P1dd};
}

double model_mi(const LinearGaussianSystem& sys, const VarList& a, const VarList& b,
                const VarList& c) {
  return cond_mutual_info_bits(sys, sys.without_degenerate(a), sys.without_degenerate(b),
                               sys.without_degenerate(c));
}

LinearGaussianSystem build_mac_helper(const MacHelperParams& p, double alpha, double beta) {
  p.validate();
  const double p0_dpc = p.P0 - beta * beta * p.Q;
  if (p0_dpc < 0.0) {
    // Tolerate rounding at the edge of the legal beta interval.
    if (p0_dpc < -1e-12 * std::max(1.0, p.P0))
      throw PowerViolationError("helper power P0 - beta^2 Q is negative");
  }
  const double p0p = std::max(0.0, p0_dpc);
  return LinearGaussianSystem::build(
      {{"S", p.Q}, {"X0p", p0p}, {"X1", p.P1}, {"X2", p.P2}, {"N", 1.0}},
      {{"U", {{"X0p", 1.0}, {"S", alpha}}},
       {"X0", {{"X0p", 1.0}, {"S", beta}}},
       {"Y", {{"X0p", 1.0}, {"S", 1.0 + beta}, {"X1", 1.0}, {"X2", 1.0}, {"N", 1.0}}}});
}

LinearGaussianSystem build_zic_verystrong(const ZicParams& p,
                                          const ZicVeryStrongCoefficients& k) {
  p.validate();
  const auto dec = forward_split(p.Q1, p.Q2, p.rho);
  const double d = dec.coefficient;
  return LinearGaussianSystem::build(
      {{"S2", p.Q2}, {"S1p", dec.residual_variance}, {"X1", p.P1}, {"X2", p.P2}, {"N1", 1.0},
       {"N2", 1.0}},
      {{"S1", {{"S2", d}, {"S1p", 1.0}}},
       {"U", {{"X1", 1.0}, {"S2", k.alpha1}, {"S1p", k.alpha2}}},
       {"V", {{"X2", 1.0}, {"S2", k.beta}}},
       {"Y1", {{"X1", 1.0}, {"X2", p.a}, {"S2", d}, {"S1p", 1.0}, {"N1", 1.0}}},
       {"Y2", {{"X2", 1.0}, {"S2", 1.0}, {"N2", 1.0}}}});
}

LinearGaussianSystem build_ic_verystrong(const IcParams& p, const IcVeryStrongCoefficients& k) {
  p.validate();
  const auto dec = forward_split(p.Q1, p.Q2, p.rho);
  const double d = dec.coefficient;
  return LinearGaussianSystem::build(
      {{"S2", p.Q2}, {"S1p", dec.residual_variance}, {"X1", p.P1}, {"X2", p.P2}, {"N1", 1.0},
       {"N2", 1.0}},
      {{"S1", {{"S2", d}, {"S1p", 1.0}}},
       {"U", {{"X1", 1.0}, {"S1p", k.alpha1}, {"S2", k.alpha2}}},
       {"V", {{"X2", 1.0}, {"S1p", k.beta1}, {"S2", k.beta2}}},
       {"Y1", {{"X1", 1.0}, {"X2", p.a}, {"S2", d}, {"S1p", 1.0}, {"N1", 1.0}}},
       {"Y2", {{"X1", p.b}, {"X2", 1.0}, {"S2", 1.0}, {"N2", 1.0}}}});
}

LinearGaussianSystem build_strong_layered(const IcParams& p, const PowerSplit& split,
                                          const StrongLayeredCoefficients& k,
                                          StrongModel model) {
  p.validate();
  if (!(split.P1p >= 0.0) || !(split.P1dd >= 0.0) ||
      split.P1p + split.P1dd > p.P1 * (1.0 + 1e-12))
    throw ParameterError("invalid power split: need P1', P1'' >= 0 and P1' + P1'' <= P1");
  const auto dec = backward_split(p.Q1, p.Q2, p.rho);
  const double c = dec.coefficient;
  const double gain = model == StrongModel::zic ? 0.0 : p.b;
  return LinearGaussianSystem::build(
      {{"S1", p.Q1}, {"S2p", dec.residual_variance}, {"X1p", split.P1p}, {"X1dd", split.P1dd},
       {"X2", p.P2}, {"N1", 1.0}, {"N2", 1.0}},
      {{"X1", {{"X1p", 1.0}, {"X1dd", 1.0}}},
       {"S2", {{"S1", c}, {"S2p", 1.0}}},
       {"U1", {{"X1p", 1.0}, {"S1", k.alpha1}}},
       {"U2", {{"X1dd", 1.0}, {"S1", k.alpha2}}},
       {"V", {{"X2", p.a}, {"S1", k.beta}}},
       {"Y1", {{"X1p", 1.0}, {"X1dd", 1.0}, {"X2", p.a}, {"S1", 1.0}, {"N1", 1.0}}},
       {"Y2", {{"X1p", gain}, {"X1dd", gain}, {"X2", 1.0}, {"S1", c}, {"S2p", 1.0}, {"N2", 1.0}}}});
}

}  // namespace dirtyregion
