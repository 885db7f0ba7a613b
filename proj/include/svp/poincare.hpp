#pragma once

// Fourier coefficients of the Poincare series P_{m,k,N} through their
// Kloosterman-Bessel expansions:
//
//   m > 0: a_n = delta_{m,n} + 2 pi (-1)^{k/2} (n/m)^{(k-1)/2}
//                 sum_{N | c} K(m, n; c)/c J_{k-1}(4 pi sqrt(mn)/c)
//   m < 0: a_n = 2 pi (-1)^{k/2} (n/|m|)^{(k-1)/2}
//                 sum_{N | c} K(m, n; c)/c I_{k-1}(4 pi sqrt(|m|n)/c)
//
// with principal part exactly q^{-|m|} in the second case.

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace svp::poincare {

struct Params {
    std::int64_t m;  // nonzero
    int k;           // even, >= 2
    std::int64_t N;  // >= 1
    std::int64_t n;  // >= 1
};

/// How far to sum. Exactly one of c_max and tol must be positive.
struct Control {
    std::int64_t c_max = 0;        // sum over c <= c_max
    double tol = 0.0;              // or: until tail_bound < tol
    std::int64_t hard_cap = 4'000'000;  // largest c tried in tol mode
    unsigned threads = 1;          // 0 picks the hardware concurrency
};

struct Coefficient {
    double value = 0.0;
    std::int64_t c_max = 0;        // largest modulus summed
    double tail_estimate = 0.0;    // tail_bound(c_max + N), or +inf if undefined there
    std::int64_t terms_summed = 0; // number of moduli c
    bool converged = true;         // false when tol mode hit the hard cap
};

/// Invalid parameters (m = 0, odd or small weight, n < 1, N < 1).
class InvalidParams : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

Coefficient poincare_coeff(const Params& p, const Control& control);

/// a_n for n = 1..n_max, sharing the Kloosterman work between all n.
std::vector<Coefficient> poincare_qexp(std::int64_t m, int k, std::int64_t N, std::int64_t n_max,
                                       const Control& control);

/// Same, for an explicit list of target indices.
std::vector<Coefficient> poincare_coeffs(std::int64_t m, int k, std::int64_t N,
                                         const std::vector<std::int64_t>& ns, const Control& control);

/// Majorant for |sum over c >= c_from, N | c| of the series terms of a_n,
/// from the Weil bound and the small-argument Bessel bound. Throws
/// std::domain_error unless 4 pi sqrt(|m| n) / c_from <= 1.
double tail_bound(std::int64_t m, std::int64_t n, int k, std::int64_t N, std::int64_t c_from);

}  // namespace svp::poincare
