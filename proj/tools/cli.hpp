// qmarg command-line front end, callable in-process for tests.
#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qmarg::cli {

enum ExitCode : int {
  kSuccess = 0,
  kFailure = 1,
  kParseError = 2,
  kInfeasible = 3,
  kOutOfRange = 4,
};

/// args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qmarg::cli
