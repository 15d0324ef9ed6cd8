#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sqflab::cli {

// Runs one subcommand (rho, cf, count, kd-sum, ap-count, residual,
// family-moments, diagnose-m, hypothesis-battery, verify). Writes the
// manifest header and CSV (or JSON) result to `out`, diagnostics to `err`.
// Exit codes: 0 success, 1 domain error, 2 usage error.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace sqflab::cli
