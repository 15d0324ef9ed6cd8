// Acceptance battery: one line per criterion, nonzero exit on any failure.
#include "sqflab/verify.hpp"

#include <cstdio>

int main() {
    auto results = sqflab::acceptance_checks();
    int failures = sqflab::print_results(results);
    if (failures) {
        std::printf("ACCEPTANCE: %d of %zu criteria failed\n", failures, results.size());
        return 1;
    }
    std::printf("ACCEPTANCE: all %zu criteria passed\n", results.size());
    return 0;
}
