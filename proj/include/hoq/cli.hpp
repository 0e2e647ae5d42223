#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hoq::cli {

/// Exit codes of `run`.
enum ExitCode : int {
  kOk = 0,             // success or true verdict
  kFalse = 1,          // completed with a false verdict
  kUsage = 2,          // usage, I/O or dimension error
  kNoCertificate = 3,  // feasibility search gave up
};

/// Runs one subcommand. `args` excludes the program name. A single JSON
/// document (or its text rendering) goes to `out`; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hoq::cli
