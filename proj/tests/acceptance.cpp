// Runs every acceptance check and prints one PASS/FAIL line per check.
// Exits nonzero when any check fails.

#include <iostream>

#include "svp/verification.hpp"

int main() {
    const auto results = svp::verify::run_suite(false, std::cout);
    int failed = 0;
    for (const auto& r : results) failed += r.pass ? 0 : 1;
    std::cout << results.size() - static_cast<std::size_t>(failed) << "/" << results.size() << " passed\n";
    return failed == 0 ? 0 : 1;
}
