#pragma once

// Named figure presets: each produces a data table and a plot.

#include <filesystem>
#include <string>
#include <vector>

#include "dirtyregion/kernels.hpp"
#include "dirtyregion/region.hpp"

namespace dirtyregion {

struct FigureOutput {
  Table table;
  PlotSpec plot;
};

const std::vector<std::string>& figure_names();
bool is_figure(const std::string& name);

/// Throws std::invalid_argument for an unknown name.
FigureOutput make_figure(const std::string& name, ExecPolicy policy = ExecPolicy::parallel);

/// Writes <dir>/<name>.csv and <dir>/<name>.svg; returns the two paths.
std::vector<std::filesystem::path> write_figure(const std::string& name,
                                                const std::filesystem::path& dir,
                                                ExecPolicy policy = ExecPolicy::parallel);

// Preset parameters shared with the tests.
namespace presets {

inline constexpr double kFig22P1 = 5.0, kFig22Q = 12.0;
inline constexpr double kFig32P = 2.0, kFig32Q = 1.0, kFig32AMax = 30.0;
inline constexpr double kFig33Q2 = 1.6, kFig33AMax = 40.0;
inline constexpr double kFig35P = 1.0, kFig35Q1 = 2.0, kFig35Q2 = 1.0, kFig35A = 1.2;
inline constexpr double kFig45B = 1.2;
inline constexpr double kFig42Q = 0.9, kFig42P = 1.0, kFig42A = 1.6, kFig42BMax = 4.3;
inline constexpr std::size_t kFig35CPoints = 21, kFig35R1Points = 101;

}  // namespace presets

/// Smallest a (bisected to `resolution`) above the very strong gate at which
/// the Z-channel condition holds, for P1 = P2 = 2, Q1 = Q2 = 1 and
/// correlation d; NaN when nothing passes up to the preset bound.
double fig3_2_min_a(double d, double resolution = 1e-4);

}  // namespace dirtyregion
