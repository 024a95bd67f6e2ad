#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace lossycap::cli {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailed = 1,
  kInvalidArguments = 2,
  kNumericalFailure = 3,
};

/// Entry point shared by the executable and the tests. args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lossycap::cli
