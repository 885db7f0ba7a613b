#pragma once

// Best rational approximation under a denominator cap.

#include <cstdint>
#include <string>

namespace svp::rational {

struct Reconstruction {
    std::int64_t num = 0;
    std::int64_t den = 1;
    double distance = 0.0;  // |x - num/den|
    std::string to_string() const;
};

/// The closest fraction p/q to x with 1 <= q <= max_den (ties go to the
/// smaller denominator). Throws std::invalid_argument for max_den < 1 or
/// non-finite x.
Reconstruction reconstruct(double x, std::int64_t max_den);

/// Largest denominator cap Q for which rationals with denominator <= Q,
/// widened by +-tol, cover at most `coverage` of the unit interval:
/// 2 tol * sum_{q <= Q} phi(q) <= coverage. Always at least 1.
std::int64_t denominator_cap(double tol, double coverage = 0.1);

}  // namespace svp::rational
