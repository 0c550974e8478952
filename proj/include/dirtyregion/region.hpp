#pragma once

// Two-user rate-region geometry and figure export.

#include <array>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "dirtyregion/kernels.hpp"

namespace dirtyregion {

struct RatePoint {
  double r1 = 0.0;
  double r2 = 0.0;
};

/// {r1 <= m1, r2 <= m2, r1 + r2 <= m12, r >= 0}
struct Pentagon {
  double m1 = 0.0;
  double m2 = 0.0;
  double m12 = 0.0;

  bool contains(RatePoint p, double tol = 1e-9) const {
    return p.r1 >= -tol && p.r2 >= -tol && p.r1 <= m1 + tol && p.r2 <= m2 + tol &&
           p.r1 + p.r2 <= m12 + tol;
  }
  /// Largest r1 in the region.
  double max_r1() const;
  double max_r2() const;
};

/// Boundary sampled on an r1 grid; binding[i] is "r2" when the R2 face
/// binds and "sum" when the sum-rate face binds.
struct BoundaryCurve {
  std::vector<RatePoint> points;
  std::vector<std::string> binding;
  bool empty() const { return points.empty(); }
};

/// A union of pentagons plus its sampled upper boundary.
struct RateRegion {
  std::vector<Pentagon> pentagons;
  BoundaryCurve boundary;

  double max_r1() const;
  double max_r2() const;
  double max_sum() const;
  bool contains(RatePoint p, double tol = 1e-9) const;
};

class EmptyRegionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ExportError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Counterclockwise from the origin; 4 vertices when the sum face is
/// inactive (m12 >= m1 + m2), fewer for degenerate pentagons.
std::vector<RatePoint> pentagon_vertices(const Pentagon& p);

/// Upper boundary of the union on `r1_grid_size` uniform points over
/// [0, max r1].
BoundaryCurve upper_envelope(const std::vector<Pentagon>& pentagons, std::size_t r1_grid_size,
                             ExecPolicy policy = ExecPolicy::parallel);

/// Upper concave envelope (time sharing) resampled on the curve's r1 grid.
BoundaryCurve concave_envelope(const BoundaryCurve& curve);

void export_csv(const BoundaryCurve& curve, const std::filesystem::path& destination);

/// Generic numeric table with a header row; values printed with 12
/// significant digits, strings verbatim.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
void export_table_csv(const Table& table, const std::filesystem::path& destination);
std::string format_number(double v);

struct PlotSeries {
  std::string name;
  std::vector<RatePoint> points;  // (x, y)
  bool markers = false;           // scatter instead of polyline
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

std::string render_svg(const PlotSpec& spec);
void export_svg(const PlotSpec& spec, const std::filesystem::path& destination);

}  // namespace dirtyregion
