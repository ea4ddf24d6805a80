#pragma once

#include <iosfwd>

namespace rlab::cli {

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageError = 1;    // bad arguments, parse errors, failed preconditions, I/O
inline constexpr int kNumericError = 2;  // fixed-point divergence in a flow

/// Runs one subcommand. Human-readable output goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rlab::cli
