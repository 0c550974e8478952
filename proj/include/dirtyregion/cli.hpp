#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace dirtyregion {

enum ExitCode : int {
  kExitOk = 0,
  kExitConditionFailed = 1,
  kExitUsage = 2,
  kExitNumeric = 3,
};

/// Entry point of the `dirty-region` tool. Reports go to `out`, diagnostics
/// and usage to `err`.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, char** argv);

}  // namespace dirtyregion
