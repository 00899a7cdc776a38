#pragma once

#include <iosfwd>

namespace infogeo {

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitNumerical = 3, kExitEscape = 4 };

/// Command-line entry point; writes tables to --out or to `out`, diagnostics to `err`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace infogeo
