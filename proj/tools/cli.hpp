#pragma once

#include <ostream>

namespace qtop::cli {

enum ExitCode {
  kOk = 0,
  kCheckFailed = 1,
  kObstruction = 2,
  kNonConvergent = 3,
  kInputError = 4,
  kCrossCheck = 5,
};

/// Runs one command line; reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qtop::cli
