#pragma once

// Channel parameter records, state-correlation decompositions, and the
// LinearGaussianSystem for each model under a given auxiliary design.

#include <stdexcept>
#include <string>

#include "dirtyregion/gauss_core.hpp"

namespace dirtyregion {

class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Helper power would go negative, or a coefficient leaves its legal range.
class PowerViolationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Parameters outside the interference regime an operation is defined for.
class RegimeGateError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// MAC with a state-aware helper: Y = X0 + X1 + X2 + S + N.
struct MacHelperParams {
  double P0 = 0.0;
  double P1 = 0.0;
  double P2 = 0.0;
  double Q = 0.0;
  void validate() const;
};

/// Z-interference channel: Y1 = X1 + a X2 + S1 + N1, Y2 = X2 + S2 + N2.
struct ZicParams {
  double a = 0.0;
  double P1 = 0.0;
  double P2 = 0.0;
  double Q1 = 0.0;
  double Q2 = 0.0;
  double rho = 0.0;
  void validate() const;
};

/// Interference channel: Y1 = X1 + a X2 + S1 + N1, Y2 = b X1 + X2 + S2 + N2.
struct IcParams {
  double a = 0.0;
  double b = 0.0;
  double P1 = 0.0;
  double P2 = 0.0;
  double Q1 = 0.0;
  double Q2 = 0.0;
  double rho = 0.0;
  void validate() const;

  /// The Z-channel obtained by dropping the X1 -> Y2 link.
  ZicParams as_zic() const { return {a, P1, P2, Q1, Q2, rho}; }
};

enum class DecompositionForm { forward, backward };

/// forward:  S1 = d S2 + S1',  Var(S1') = (1 - rho^2) Q1
/// backward: S2 = c S1 + S2',  Var(S2') = (1 - rho^2) Q2
struct StateDecomposition {
  DecompositionForm form = DecompositionForm::forward;
  double coefficient = 0.0;
  double residual_variance = 0.0;
};

/// Throws ParameterError when Q2 == 0; use forward_split for the
/// deterministic-zero fallback.
StateDecomposition decompose_forward(double Q1, double Q2, double rho);
/// Throws ParameterError when Q1 == 0; use backward_split for the fallback.
StateDecomposition decompose_backward(double Q1, double Q2, double rho);

/// Like decompose_forward, but a zero-variance S2 yields d = 0 and
/// residual = Q1.
StateDecomposition forward_split(double Q1, double Q2, double rho);
/// Like decompose_backward, but a zero-variance S1 yields c = 0 and
/// residual = Q2.
StateDecomposition backward_split(double Q1, double Q2, double rho);

struct MacCoefficients {
  double alpha = 0.0;
  double beta = 0.0;
};

struct ZicVeryStrongCoefficients {
  double alpha1 = 0.0;  // weight of S2 in U
  double alpha2 = 0.0;  // weight of S1' in U
  double beta = 0.0;    // weight of S2 in V
};

struct IcVeryStrongCoefficients {
  double alpha1 = 0.0;  // weight of S1' in U
  double alpha2 = 0.0;  // weight of S2 in U
  double beta1 = 0.0;   // weight of S1' in V
  double beta2 = 0.0;   // weight of S2 in V
};

/// Transmitter-1 rate split; the layer powers must sum to at most P1.
struct PowerSplit {
  double P1p = 0.0;   // P1'
  double P1dd = 0.0;  // P1''
};

struct StrongLayeredCoefficients {
  double alpha1 = 0.0;  // U1 = X1' + alpha1 S1
  double alpha2 = 0.0;  // U2 = X1'' + alpha2 S1
  double beta = 0.0;    // V = a X2 + beta S1
};

enum class StrongModel { zic, ic };

/// Bases {S, X0p, X1, X2, N}; derived {U, X0, Y}.
LinearGaussianSystem build_mac_helper(const MacHelperParams& params, double alpha, double beta);

/// Bases {S2, S1p, X1, X2, N1, N2}; derived {S1, U, V, Y1, Y2}.
LinearGaussianSystem build_zic_verystrong(const ZicParams& params,
                                          const ZicVeryStrongCoefficients& coeffs);

/// Same base order as the Z-channel builder; Y2 additionally carries b X1.
LinearGaussianSystem build_ic_verystrong(const IcParams& params,
                                         const IcVeryStrongCoefficients& coeffs);

/// Bases {S1, S2p, X1p, X1dd, X2, N1, N2}; derived {X1, S2, U1, U2, V, Y1, Y2}.
/// For StrongModel::zic the X1 -> Y2 gain is forced to 0.
LinearGaussianSystem build_strong_layered(const IcParams& params, const PowerSplit& split,
                                          const StrongLayeredCoefficients& coeffs,
                                          StrongModel model);

/// Validates 0 <= P1'' <= P1 and returns {P1 - P1'', P1''}.
PowerSplit make_split(double P1, double P1dd);

/// I(A;B|C) after dropping identically-zero variables from each list, so
/// degenerate layers (P1' = 0, Q1' = 0, ...) contribute nothing instead of
/// tripping the singularity check.
double model_mi(const LinearGaussianSystem& sys, const VarList& a, const VarList& b,
                const VarList& c = {});

}  // namespace dirtyregion
