#pragma once

// Shared pieces of the Z-channel and IC strong-regime analyses.

#include <functional>

#include "dirtyregion/z_ic.hpp"

namespace dirtyregion::detail {

/// Split, coefficients, target rates and per-layer achieved rates at
/// receiver 1; the condition is left for the caller.
StrongPointResult strong_point_common(const IcParams& params, double P1dd, StrongModel model);

/// Scans P1'' over [lo, hi] starting from hi and bisects the first
/// pass-to-fail crossing.
StrongSegment scan_segment(const std::function<double(double)>& margin, double lo, double hi,
                           const IcParams& params, const SegmentScan& scan);

}  // namespace dirtyregion::detail
