#pragma once

// The acceptance checks, shared by `svp verify` and the acceptance binary.

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace svp::verify {

struct CheckResult {
    int id = 0;
    std::string title;
    bool pass = false;
    std::string measured;
    std::string expected;
    std::string tolerance;
    double seconds = 0.0;
};

struct Check {
    int id;
    std::string title;
    bool slow;  // budgeted over 10 s; skipped by the fast suite
    std::function<CheckResult()> run;
};

const std::vector<Check>& checks();

/// "PASS [3] title | measured ... | expected ... | tol ... | 1.2 s"
std::string format_line(const CheckResult& r);

/// Run every check (or only the fast ones), printing one line per check to
/// `out` as it finishes. An exception inside a check counts as a failure.
std::vector<CheckResult> run_suite(bool fast_only, std::ostream& out);

}  // namespace svp::verify
