#pragma once

#include <iosfwd>

namespace stein::cli {

/// Report schema version written into every JSON report.
inline constexpr int kReportVersion = 1;

/// Exit codes: 0 all certified or passed, 2 an uncertified result, 1 a usage,
/// configuration or domain error.
inline constexpr int kExitPass = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitUncertified = 2;

/// Runs one subcommand. The JSON report goes to --output or, when that is
/// empty, to `out`; diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stein::cli
