#pragma once

#include <ostream>

namespace wip::cli {

// Exit status contract of the `wip` tool.
enum ExitCode : int {
  kOk = 0,
  kAcceptanceFailed = 1,
  kInputError = 2,
  kRuntimeError = 3,
};

/// Runs one command line. Reports go to `out` unless --out names a file;
/// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace wip::cli
