#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ltg {

/// Exit codes returned by run().
enum ExitCode : int {
  kExitOk = 0,
  kExitVerificationFailed = 1,
  kExitInvalid = 2,
  kExitIo = 3,
};

/// Entry point of the `ltg` tool. `args` excludes the program name.
/// Results go to `out` (or to --out), diagnostics and summaries to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int run(int argc, const char* const* argv);

}  // namespace ltg
