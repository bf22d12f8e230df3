#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace ewpo::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kNumeric = 4 };

/// Runs one command line (args[0] is the program name). Reports go to `out`,
/// diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ewpo::cli
