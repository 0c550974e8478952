#include "dirtyregion/gauss_core.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

namespace dirtyregion {

namespace {

constexpr double kPivotTolerance = 1e-12;
constexpr double kNegativeMiTolerance = 1e-9;

std::string join(const VarList& names) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out << ',';
    out << names[i];
  }
  out << '}';
  return out.str();
}

VarList pick(const VarList& labels, const std::vector<std::size_t>& idx) {
  VarList out;
  if (labels.empty()) return out;
  for (auto i : idx) out.push_back(i < labels.size() ? labels[i] : "#" + std::to_string(i));
  return out;
}

std::vector<std::size_t> concat(const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
  std::vector<std::size_t> out(x);
  out.insert(out.end(), y.begin(), y.end());
  return out;
}

double log_det_subset(const CovMatrix& cov, const std::vector<std::size_t>& idx,
                      const VarList& labels) {
  if (idx.empty()) return 0.0;
  return log_det(cov.principal(idx), pick(labels, idx));
}

}  // namespace

CovMatrix CovMatrix::principal(const std::vector<std::size_t>& idx) const {
  CovMatrix out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = (*this)(idx[i], idx[j]);
  return out;
}

bool CovMatrix::is_symmetric(double tol) const {
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (std::abs((*this)(i, j) - (*this)(j, i)) > tol) return false;
  return true;
}

LinearGaussianSystem LinearGaussianSystem::build(std::vector<BaseVariable> bases,
                                                 std::vector<DerivedVariable> derived) {
  LinearGaussianSystem sys;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    const auto& b = bases[i];
    if (!(b.variance >= 0.0) || !std::isfinite(b.variance))
      throw SystemDefinitionError("negative or non-finite variance for base '" + b.name + "'");
    if (!seen.insert(b.name).second)
      throw SystemDefinitionError("duplicate variable name '" + b.name + "'");
    sys.base_index_[b.name] = i;
  }
  for (std::size_t i = 0; i < derived.size(); ++i) {
    const auto& d = derived[i];
    if (!seen.insert(d.name).second)
      throw SystemDefinitionError("duplicate variable name '" + d.name + "'");
    if (d.coefficients.size() != bases.size())
      throw SystemDefinitionError("coefficient vector of '" + d.name + "' has length " +
                                  std::to_string(d.coefficients.size()) + ", expected " +
                                  std::to_string(bases.size()));
    for (double c : d.coefficients)
      if (!std::isfinite(c))
        throw SystemDefinitionError("non-finite coefficient in '" + d.name + "'");
    sys.derived_index_[d.name] = i;
  }
  sys.bases_ = std::move(bases);
  sys.derived_ = std::move(derived);
  return sys;
}

LinearGaussianSystem LinearGaussianSystem::build(
    std::vector<BaseVariable> bases,
    const std::vector<std::pair<std::string, std::map<std::string, double>>>& derived) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < bases.size(); ++i) index[bases[i].name] = i;
  std::vector<DerivedVariable> dense;
  for (const auto& [name, terms] : derived) {
    DerivedVariable d{name, std::vector<double>(bases.size(), 0.0)};
    for (const auto& [base, coef] : terms) {
      auto it = index.find(base);
      if (it == index.end())
        throw SystemDefinitionError("derived '" + name + "' references unknown base '" + base + "'");
      d.coefficients[it->second] += coef;
    }
    dense.push_back(std::move(d));
  }
  return build(std::move(bases), std::move(dense));
}

bool LinearGaussianSystem::contains(const std::string& name) const {
  return base_index_.count(name) || derived_index_.count(name);
}

std::vector<double> LinearGaussianSystem::coefficients(const std::string& name) const {
  if (auto it = base_index_.find(name); it != base_index_.end()) {
    std::vector<double> unit(bases_.size(), 0.0);
    unit[it->second] = 1.0;
    return unit;
  }
  if (auto it = derived_index_.find(name); it != derived_index_.end())
    return derived_[it->second].coefficients;
  throw SystemDefinitionError("unknown variable '" + name + "'");
}

double LinearGaussianSystem::variance(const std::string& name) const {
  const auto c = coefficients(name);
  double v = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) v += c[k] * c[k] * bases_[k].variance;
  return v;
}

bool LinearGaussianSystem::is_degenerate(const std::string& name) const {
  return variance(name) == 0.0;
}

VarList LinearGaussianSystem::without_degenerate(const VarList& names) const {
  VarList out;
  for (const auto& n : names)
    if (!is_degenerate(n)) out.push_back(n);
  return out;
}

CovMatrix LinearGaussianSystem::covariance(const VarList& names) const {
  std::vector<std::vector<double>> rows;
  rows.reserve(names.size());
  for (const auto& n : names) rows.push_back(coefficients(n));
  CovMatrix cov(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) {
    for (std::size_t j = i; j < names.size(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < bases_.size(); ++k)
        s += rows[i][k] * rows[j][k] * bases_[k].variance;
      cov(i, j) = s;
      cov(j, i) = s;
    }
  }
  return cov;
}

double log_det(const CovMatrix& cov, const VarList& labels) {
  const std::size_t n = cov.size();
  if (n == 0) return 0.0;
  double scale = 1.0;
  for (std::size_t i = 0; i < n; ++i) scale = std::max(scale, std::abs(cov(i, i)));
  const double threshold = kPivotTolerance * scale;

  // Lower-triangular Cholesky factor, in place on a copy.
  std::vector<double> l(n * n, 0.0);
  double acc = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double d = cov(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (!(d > threshold)) {
      throw SingularCovarianceError(
          "covariance of " + (labels.empty() ? std::string("subset") : join(labels)) +
              " is singular (pivot " + std::to_string(d) + ")",
          labels);
    }
    const double ljj = std::sqrt(d);
    l[j * n + j] = ljj;
    acc += std::log(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = cov(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / ljj;
    }
  }
  return acc;
}

double entropy_bits(const CovMatrix& cov, const VarList& labels) {
  const double n = static_cast<double>(cov.size());
  const double two_pi_e = 2.0 * std::numbers::pi * std::numbers::e;
  return 0.5 * (n * std::log(two_pi_e) + log_det(cov, labels)) / std::numbers::ln2;
}

double mutual_info_bits(const CovMatrix& cov, const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b, const std::vector<std::size_t>& c,
                        const VarList& labels) {
  if (a.empty() || b.empty()) return 0.0;
  const auto ac = concat(a, c);
  const auto bc = concat(b, c);
  const auto abc = concat(ac, b);
  const double nats = 0.5 * (log_det_subset(cov, ac, labels) + log_det_subset(cov, bc, labels) -
                             log_det_subset(cov, abc, labels) - log_det_subset(cov, c, labels));
  const double bits = nats / std::numbers::ln2;
  if (bits < -kNegativeMiTolerance)
    throw NumericError("mutual information evaluated to " + std::to_string(bits) + " bits");
  return std::max(bits, 0.0);
}

double entropy_bits(const LinearGaussianSystem& sys, const VarList& names) {
  return entropy_bits(sys.covariance(names), names);
}

double mutual_info_bits(const LinearGaussianSystem& sys, const VarList& a, const VarList& b) {
  return cond_mutual_info_bits(sys, a, b, {});
}

double cond_mutual_info_bits(const LinearGaussianSystem& sys, const VarList& a, const VarList& b,
                             const VarList& c) {
  if (a.empty() || b.empty()) return 0.0;
  VarList all(a);
  all.insert(all.end(), b.begin(), b.end());
  all.insert(all.end(), c.begin(), c.end());
  const auto cov = sys.covariance(all);
  std::vector<std::size_t> ia, ib, ic;
  std::size_t k = 0;
  for (std::size_t i = 0; i < a.size(); ++i) ia.push_back(k++);
  for (std::size_t i = 0; i < b.size(); ++i) ib.push_back(k++);
  for (std::size_t i = 0; i < c.size(); ++i) ic.push_back(k++);
  return mutual_info_bits(cov, ia, ib, ic, all);
}

double half_log2(double x) { return 0.5 * std::log2(x); }

}  // namespace dirtyregion
