#include "dirtyregion/kernels.hpp"

#include <omp.h>

#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <random>

#include "dirtyregion/region.hpp"

namespace dirtyregion {

namespace {

std::atomic<int> g_jobs{0};

// Runs body(i) for i in [0, n) on the OpenMP team. The exception thrown by
// the lowest index wins, so failures are as deterministic as results.
template <class Body>
void omp_for(std::size_t n, Body&& body) {
  std::exception_ptr error;
  std::size_t error_index = std::numeric_limits<std::size_t>::max();
  std::mutex mu;
  const int jobs = g_jobs.load();
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(static) num_threads(jobs > 0 ? jobs : omp_get_max_threads())
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(mu);
      if (static_cast<std::size_t>(i) < error_index) {
        error_index = static_cast<std::size_t>(i);
        error = std::current_exception();
      }
    }
  }
  if (error) std::rethrow_exception(error);
}

template <class Body>
void serial_for(std::size_t n, Body&& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

void envelope_point(const std::vector<Pentagon>& pentagons, double r1, RatePoint& point,
                    std::string& binding) {
  double best = -1.0;
  bool sum_binds = false;
  for (const auto& p : pentagons) {
    if (r1 > p.max_r1()) continue;
    const double via_sum = p.m12 - r1;
    const double v = std::max(0.0, std::min(p.m2, via_sum));
    if (v > best) {
      best = v;
      sum_binds = via_sum < p.m2;
    }
  }
  point = {r1, std::max(best, 0.0)};
  binding = sum_binds ? "sum" : "r2";
}

template <class For>
BoundaryCurve envelope_with(const std::vector<Pentagon>& pentagons,
                            const std::vector<double>& grid, For&& loop) {
  BoundaryCurve out;
  out.points.resize(grid.size());
  out.binding.resize(grid.size());
  loop(grid.size(), [&](std::size_t i) {
    envelope_point(pentagons, grid[i], out.points[i], out.binding[i]);
  });
  return out;
}

template <class For>
std::vector<Pentagon> grid_with(const std::vector<double>& alphas, const std::vector<double>& betas,
                                const std::function<Pentagon(double, double)>& make, For&& loop) {
  std::vector<Pentagon> out(alphas.size() * betas.size());
  const std::size_t nb = betas.size();
  loop(out.size(), [&](std::size_t k) { out[k] = make(alphas[k / nb], betas[k % nb]); });
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Box-Muller on 53-bit uniforms; u1 is kept in (0, 1] so log(u1) is finite.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : gen_(seed) {}
  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    constexpr double scale = 1.0 / 9007199254740992.0;  // 2^-53
    const double u1 = (static_cast<double>(gen_() >> 11) + 1.0) * scale;
    const double u2 = static_cast<double>(gen_() >> 11) * scale;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

MomentSums shard_moments(const std::vector<std::vector<double>>& rows,
                         const std::vector<double>& variances, std::size_t count,
                         std::uint64_t seed) {
  const std::size_t dim = rows.size();
  const std::size_t nb = variances.size();
  std::vector<double> sd(nb);
  for (std::size_t k = 0; k < nb; ++k) sd[k] = std::sqrt(variances[k]);

  MomentSums m;
  m.count = count;
  m.sum.assign(dim, 0.0);
  m.sum_sq.assign(dim * dim, 0.0);
  NormalStream normal(seed);
  std::vector<double> z(nb), v(dim);
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t k = 0; k < nb; ++k) z[k] = sd[k] * normal.next();
    for (std::size_t i = 0; i < dim; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < nb; ++k) acc += rows[i][k] * z[k];
      v[i] = acc;
      m.sum[i] += acc;
    }
    for (std::size_t i = 0; i < dim; ++i)
      for (std::size_t j = i; j < dim; ++j) m.sum_sq[i * dim + j] += v[i] * v[j];
  }
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < i; ++j) m.sum_sq[i * dim + j] = m.sum_sq[j * dim + i];
  return m;
}

template <class For>
MomentSums moments_with(const std::vector<std::vector<double>>& rows,
                        const std::vector<double>& variances, std::size_t n, std::uint64_t seed,
                        For&& loop) {
  const std::size_t shards = (n + kShardSize - 1) / kShardSize;
  std::vector<MomentSums> parts(shards);
  loop(shards, [&](std::size_t s) {
    const std::size_t count = std::min(kShardSize, n - s * kShardSize);
    parts[s] = shard_moments(rows, variances, count, splitmix64(seed ^ splitmix64(s)));
  });
  MomentSums total;
  total.sum.assign(rows.size(), 0.0);
  total.sum_sq.assign(rows.size() * rows.size(), 0.0);
  for (const auto& p : parts) {
    total.count += p.count;
    for (std::size_t i = 0; i < p.sum.size(); ++i) total.sum[i] += p.sum[i];
    for (std::size_t i = 0; i < p.sum_sq.size(); ++i) total.sum_sq[i] += p.sum_sq[i];
  }
  return total;
}

}  // namespace

void set_parallel_jobs(int jobs) { g_jobs.store(jobs > 0 ? jobs : 0); }
int parallel_jobs() { return g_jobs.load(); }

std::vector<double> map_indices(std::size_t n, const std::function<double(std::size_t)>& fn,
                                ExecPolicy policy) {
  std::vector<double> out(n);
  auto body = [&](std::size_t i) { out[i] = fn(i); };
  if (policy == ExecPolicy::serial)
    serial_for(n, body);
  else
    omp_for(n, body);
  return out;
}

std::vector<Pentagon> pentagon_grid_serial(const std::vector<double>& alphas,
                                           const std::vector<double>& betas,
                                           const std::function<Pentagon(double, double)>& make) {
  return grid_with(alphas, betas, make, [](std::size_t n, auto&& b) { serial_for(n, b); });
}

std::vector<Pentagon> pentagon_grid_parallel(const std::vector<double>& alphas,
                                             const std::vector<double>& betas,
                                             const std::function<Pentagon(double, double)>& make) {
  return grid_with(alphas, betas, make, [](std::size_t n, auto&& b) { omp_for(n, b); });
}

BoundaryCurve envelope_serial(const std::vector<Pentagon>& pentagons,
                              const std::vector<double>& r1_grid) {
  return envelope_with(pentagons, r1_grid, [](std::size_t n, auto&& b) { serial_for(n, b); });
}

BoundaryCurve envelope_parallel(const std::vector<Pentagon>& pentagons,
                                const std::vector<double>& r1_grid) {
  return envelope_with(pentagons, r1_grid, [](std::size_t n, auto&& b) { omp_for(n, b); });
}

MomentSums sample_moments_serial(const std::vector<std::vector<double>>& rows,
                                 const std::vector<double>& variances, std::size_t n,
                                 std::uint64_t seed) {
  return moments_with(rows, variances, n, seed,
                      [](std::size_t k, auto&& b) { serial_for(k, b); });
}

MomentSums sample_moments_parallel(const std::vector<std::vector<double>>& rows,
                                   const std::vector<double>& variances, std::size_t n,
                                   std::uint64_t seed) {
  return moments_with(rows, variances, n, seed, [](std::size_t k, auto&& b) { omp_for(k, b); });
}

}  // namespace dirtyregion
