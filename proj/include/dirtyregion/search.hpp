#pragma once

// Deterministic grid-plus-refinement scalar search.

#include <cstddef>
#include <functional>
#include <stdexcept>
#include <vector>

namespace dirtyregion {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

class NonFiniteObjectiveError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Maximum1d {
  double x = 0.0;
  double value = 0.0;
};

struct Maximum2d {
  double x = 0.0;
  double y = 0.0;
  double value = 0.0;
};

using Objective1d = std::function<double(double)>;
using Objective2d = std::function<double(double, double)>;

/// Uniform grid of `n` points over [lo, hi] (n >= 2), or the single point lo
/// when the interval is degenerate.
std::vector<double> linspace(Interval range, std::size_t n);

/// Coarse grid, then golden-section on the bracket around the best sample.
/// Ties go to the smaller x. The returned value is never below any grid
/// sample.
Maximum1d maximize_1d(const Objective1d& objective, Interval range, double tol = 1e-8,
                      std::size_t grid = 1025);

/// Grid search then alternating maximize_1d (at most `rounds` rounds).
/// Local guarantee only.
Maximum2d maximize_2d(const Objective2d& objective, Interval xs, Interval ys, double tol = 1e-8,
                      std::size_t grid_x = 257, std::size_t grid_y = 129, int rounds = 64);

/// Maximal subintervals where margin(x) >= 0. Sign changes between grid
/// samples are bisected to `resolution`. Non-finite margins count as
/// failing.
std::vector<Interval> satisfied_intervals(const Objective1d& margin, Interval range,
                                          std::size_t grid = 1025, double resolution = 1e-8);

/// Bisects a sign change of `margin` on [lo, hi] (margin(lo) and margin(hi)
/// of opposite pass/fail status) down to `resolution`; returns the point on
/// the passing side.
double bisect_boundary(const Objective1d& margin, double lo, double hi, double resolution = 1e-8);

}  // namespace dirtyregion
