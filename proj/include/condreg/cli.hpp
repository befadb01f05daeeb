#pragma once

#include <iosfwd>

namespace condreg::cli {

/// Exit codes: 0 success, 1 usage error, 2 invalid input or parameters,
/// 3 numerical failure.
enum ExitCode : int { kOk = 0, kUsage = 1, kInvalid = 2, kNumerical = 3 };

/// Entry point behind the `condreg` executable. Matrix results without
/// `--output` go to `out`; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace condreg::cli
