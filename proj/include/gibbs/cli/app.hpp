#pragma once

#include <iosfwd>

namespace gibbs::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitTestFailure = 1,
  kExitUsage = 2,
  kExitSweepExhausted = 3,
  kExitRuntime = 4,
};

/// Entry point of the gibbsglauber tool. Records go to `out` unless --out is
/// given; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gibbs::cli
