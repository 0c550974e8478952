#pragma once

#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace dirtyregion {

/// Outcome of a regime or achievability condition. `margin` >= 0 (up to the
/// check's tolerance) means the condition holds.
struct ConditionReport {
  std::string condition;
  bool pass = false;
  double margin = NAN;
  std::map<std::string, double> witness;
  std::vector<std::string> notes;
};

}  // namespace dirtyregion
