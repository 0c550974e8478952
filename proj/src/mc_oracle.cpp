#include "dirtyregion/mc_oracle.hpp"

#include <stdexcept>

namespace dirtyregion {

CovMatrix sample_covariance(const LinearGaussianSystem& sys, const VarList& names,
                            const SampleConfig& cfg) {
  if (cfg.samples < 2) throw std::invalid_argument("sample count must be at least 2");
  std::vector<std::vector<double>> rows;
  rows.reserve(names.size());
  for (const auto& n : names) rows.push_back(sys.coefficients(n));
  std::vector<double> variances;
  for (const auto& b : sys.bases()) variances.push_back(b.variance);

  const auto m = cfg.policy == ExecPolicy::serial
                     ? sample_moments_serial(rows, variances, cfg.samples, cfg.seed)
                     : sample_moments_parallel(rows, variances, cfg.samples, cfg.seed);
  const std::size_t dim = names.size();
  const double n = static_cast<double>(m.count);
  CovMatrix cov(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j)
      cov(i, j) = (m.sum_sq[i * dim + j] - m.sum[i] * m.sum[j] / n) / (n - 1.0);
  return cov;
}

double entropy_estimate(const LinearGaussianSystem& sys, const VarList& names,
                        const SampleConfig& cfg) {
  const auto kept = sys.without_degenerate(names);
  return entropy_bits(sample_covariance(sys, kept, cfg), kept);
}

double mi_estimate(const LinearGaussianSystem& sys, const VarList& a, const VarList& b,
                   const SampleConfig& cfg) {
  return cond_mi_estimate(sys, a, b, {}, cfg);
}

double cond_mi_estimate(const LinearGaussianSystem& sys, const VarList& a, const VarList& b,
                        const VarList& c, const SampleConfig& cfg) {
  const auto ka = sys.without_degenerate(a);
  const auto kb = sys.without_degenerate(b);
  const auto kc = sys.without_degenerate(c);
  if (ka.empty() || kb.empty()) return 0.0;
  VarList all(ka);
  all.insert(all.end(), kb.begin(), kb.end());
  all.insert(all.end(), kc.begin(), kc.end());
  const auto cov = sample_covariance(sys, all, cfg);
  std::vector<std::size_t> ia, ib, ic;
  std::size_t k = 0;
  for (std::size_t i = 0; i < ka.size(); ++i) ia.push_back(k++);
  for (std::size_t i = 0; i < kb.size(); ++i) ib.push_back(k++);
  for (std::size_t i = 0; i < kc.size(); ++i) ic.push_back(k++);
  return mutual_info_bits(cov, ia, ib, ic, all);
}

}  // namespace dirtyregion
