#pragma once

#include <string>
#include <vector>

namespace sqflab {

struct CheckResult {
    std::string name;
    bool pass = false;
    double seconds = 0.0;
    double budget_seconds = 0.0; // 0 = untimed
    std::string detail;
};

// Fast example-level checks across every module (a green build passes all of
// them in well under a minute).
std::vector<CheckResult> quick_checks();

// The acceptance battery: exact identities, brute-force oracle equivalence,
// and bounded-error checks with explicit constants and runtime budgets.
std::vector<CheckResult> acceptance_checks();

// One "PASS name (1.23s): detail" line per result; returns the number of
// failures.
int print_results(const std::vector<CheckResult>& results);

} // namespace sqflab
