#pragma once

// Command-line front end. Commands write to the given streams so they can be
// driven in-process by tests.

#include <iosfwd>
#include <string>
#include <vector>

namespace galmon::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kUsage = 2,
  kRankDeficient = 3,
  kTrackingFailure = 4,
  kUnsupportedGroup = 5,
};

/// `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace galmon::cli
