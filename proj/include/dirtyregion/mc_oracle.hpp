#pragma once

// Seeded Monte-Carlo estimates for a LinearGaussianSystem. Samples come
// from mt19937_64 through the Box-Muller transform; see kernels.hpp for the
// sharding scheme.

#include <cstdint>

#include "dirtyregion/gauss_core.hpp"
#include "dirtyregion/kernels.hpp"

namespace dirtyregion {

struct SampleConfig {
  std::size_t samples = 1000000;
  std::uint64_t seed = 0x5EED;
  ExecPolicy policy = ExecPolicy::parallel;
};

/// Unbiased empirical covariance of the named variables.
CovMatrix sample_covariance(const LinearGaussianSystem& sys, const VarList& names,
                            const SampleConfig& cfg = {});

/// Plug-in Gaussian estimates from the empirical covariance. Identically
/// zero variables are dropped first, as in model_mi.
double entropy_estimate(const LinearGaussianSystem& sys, const VarList& names,
                        const SampleConfig& cfg = {});
double mi_estimate(const LinearGaussianSystem& sys, const VarList& a, const VarList& b,
                   const SampleConfig& cfg = {});
double cond_mi_estimate(const LinearGaussianSystem& sys, const VarList& a, const VarList& b,
                        const VarList& c, const SampleConfig& cfg = {});

}  // namespace dirtyregion
