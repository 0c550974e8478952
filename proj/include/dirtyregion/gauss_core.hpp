#pragma once

// Exact entropy and mutual information for jointly Gaussian variables that
// are linear combinations of independent zero-mean Gaussian bases.
//
// Every rate in this library is in bits.

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace dirtyregion {

using VarList = std::vector<std::string>;

/// Raised when a covariance subset is not positive definite. The message
/// names the offending variables.
class SingularCovarianceError : public std::runtime_error {
 public:
  SingularCovarianceError(const std::string& what, VarList subset)
      : std::runtime_error(what), subset_(std::move(subset)) {}
  const VarList& subset() const noexcept { return subset_; }

 private:
  VarList subset_;
};

/// Raised for inconsistent system definitions (duplicate names, length
/// mismatch, negative variance) and unknown variable lookups.
class SystemDefinitionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a floating-point result violates a hard numeric invariant.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Dense symmetric matrix, row-major.
class CovMatrix {
 public:
  CovMatrix() = default;
  explicit CovMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}

  std::size_t size() const noexcept { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  /// Principal submatrix on the given row/column indices.
  CovMatrix principal(const std::vector<std::size_t>& idx) const;

  bool is_symmetric(double tol = 1e-12) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct BaseVariable {
  std::string name;
  double variance = 0.0;
};

struct DerivedVariable {
  std::string name;
  std::vector<double> coefficients;  // one per base, in base order
};

class LinearGaussianSystem {
 public:
  /// Validates and builds. Throws SystemDefinitionError.
  static LinearGaussianSystem build(std::vector<BaseVariable> bases,
                                    std::vector<DerivedVariable> derived);

  /// Sparse builder: derived variables given as {base name -> coefficient}.
  static LinearGaussianSystem build(
      std::vector<BaseVariable> bases,
      const std::vector<std::pair<std::string, std::map<std::string, double>>>& derived);

  std::size_t base_count() const noexcept { return bases_.size(); }
  const std::vector<BaseVariable>& bases() const noexcept { return bases_; }
  const std::vector<DerivedVariable>& derived() const noexcept { return derived_; }

  bool contains(const std::string& name) const;

  /// Coefficient vector over the bases. A base maps to its unit vector.
  std::vector<double> coefficients(const std::string& name) const;

  double variance(const std::string& name) const;

  /// True when the variable is identically zero (all of its weight sits on
  /// zero-variance bases).
  bool is_degenerate(const std::string& name) const;

  /// Drops degenerate variables from a list, preserving order.
  VarList without_degenerate(const VarList& names) const;

  /// Sigma[i][j] = sum_k c_i[k] c_j[k] Var(base_k).
  CovMatrix covariance(const VarList& names) const;

 private:
  std::vector<BaseVariable> bases_;
  std::vector<DerivedVariable> derived_;
  std::map<std::string, std::size_t> base_index_;
  std::map<std::string, std::size_t> derived_index_;
};

/// Natural log-determinant through Cholesky. A pivot at or below
/// 1e-12 * max(1, largest diagonal) is treated as singular and raises
/// SingularCovarianceError labelled with `labels`.
double log_det(const CovMatrix& cov, const VarList& labels = {});

/// Differential entropy of N(0, cov) in bits.
double entropy_bits(const CovMatrix& cov, const VarList& labels = {});

/// I(A;B|C) in bits for index sets into `cov`. Empty A or B yields 0; empty
/// C means unconditional. Values in [-1e-9, 0) are clamped to 0; anything
/// lower raises NumericError.
double mutual_info_bits(const CovMatrix& cov, const std::vector<std::size_t>& a,
                        const std::vector<std::size_t>& b,
                        const std::vector<std::size_t>& c = {},
                        const VarList& labels = {});

double entropy_bits(const LinearGaussianSystem& sys, const VarList& names);
double mutual_info_bits(const LinearGaussianSystem& sys, const VarList& a, const VarList& b);
double cond_mutual_info_bits(const LinearGaussianSystem& sys, const VarList& a,
                             const VarList& b, const VarList& c);

/// 0.5 * log2(x); the capacity-formula workhorse.
double half_log2(double x);

}  // namespace dirtyregion
