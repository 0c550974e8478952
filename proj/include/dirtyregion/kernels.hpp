#pragma once

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version; both write into preallocated slots and reduce in index
// order, so their outputs are bit-identical.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace dirtyregion {

enum class ExecPolicy { serial, parallel };

struct Pentagon;
struct BoundaryCurve;

/// Thread count used by ExecPolicy::parallel; 0 keeps the OpenMP default.
void set_parallel_jobs(int jobs);
int parallel_jobs();

/// out[i] = fn(i) for i in [0, n).
std::vector<double> map_indices(std::size_t n, const std::function<double(std::size_t)>& fn,
                                ExecPolicy policy);

/// Pentagons for every (alpha_i, beta_j), row-major over alpha.
std::vector<Pentagon> pentagon_grid_serial(const std::vector<double>& alphas,
                                           const std::vector<double>& betas,
                                           const std::function<Pentagon(double, double)>& make);
std::vector<Pentagon> pentagon_grid_parallel(const std::vector<double>& alphas,
                                             const std::vector<double>& betas,
                                             const std::function<Pentagon(double, double)>& make);

BoundaryCurve envelope_serial(const std::vector<Pentagon>& pentagons,
                              const std::vector<double>& r1_grid);
BoundaryCurve envelope_parallel(const std::vector<Pentagon>& pentagons,
                                const std::vector<double>& r1_grid);

/// Raw first and second moments of a block of Gaussian samples.
struct MomentSums {
  std::size_t count = 0;
  std::vector<double> sum;      // per variable
  std::vector<double> sum_sq;   // row-major dim x dim
};

/// Draws `n` samples of `rows * bases`, where bases are independent
/// N(0, variance) draws. Work is cut into fixed shards of `shard_size`
/// samples with per-shard seeds, so the result depends only on (seed, n).
MomentSums sample_moments_serial(const std::vector<std::vector<double>>& rows,
                                 const std::vector<double>& variances, std::size_t n,
                                 std::uint64_t seed);
MomentSums sample_moments_parallel(const std::vector<std::vector<double>>& rows,
                                   const std::vector<double>& variances, std::size_t n,
                                   std::uint64_t seed);

inline constexpr std::size_t kShardSize = 65536;

}  // namespace dirtyregion
