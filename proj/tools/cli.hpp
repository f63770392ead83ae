#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace twonorm::cli {

enum ExitCode : int {
  kOk = 0,
  kUsage = 1,
  kInput = 2,
  kSuiteFailure = 3,
  kNotConverged = 4,
};

/// Runs one invocation; args excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace twonorm::cli
