#pragma once

// Exact integer and modular arithmetic: inverses, divisor functions and
// Kloosterman sums K(a, b; c) = sum over x in (Z/cZ)^* of e((a x + b x^-1) / c).

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace svp::arith {

/// Largest modulus accepted by the public Kloosterman interface.
inline constexpr std::int64_t kMaxModulus = std::int64_t{1} << 31;

/// Raised when an inverse is requested for a residue sharing a factor with
/// the modulus.
class NotInvertible : public std::domain_error {
public:
    NotInvertible(std::int64_t x, std::int64_t c);
};

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

/// Residue of x in [0, c).
constexpr std::int64_t mod(std::int64_t x, std::int64_t c) noexcept {
    const std::int64_t r = x % c;
    return r < 0 ? r + c : r;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) noexcept;

/// y in [0, c) with x*y = 1 (mod c). For c = 1 the answer is 0.
/// Throws NotInvertible when gcd(x, c) > 1 and std::overflow_error when c is
/// outside [1, kMaxModulus].
std::int64_t mod_inverse(std::int64_t x, std::int64_t c);

/// Kloosterman sum by direct summation over the units mod c.
double kloosterman(std::int64_t a, std::int64_t b, std::int64_t c);

/// Same value as kloosterman(), evaluated through the twisted
/// multiplicativity K(a,b;rs) = K(a s', b s'; r) K(a r', b r'; s) over the
/// prime-power factorisation of c. Prime moduli reduce to K(1, ab; p).
double kloosterman_factored(std::int64_t a, std::int64_t b, std::int64_t c);

/// K(a, b_i; c) for every b_i, sharing the per-prime tables between the
/// entries. Agrees with kloosterman_factored() entry by entry.
std::vector<double> kloosterman_batch(std::int64_t a, const std::vector<std::int64_t>& bs,
                                      std::int64_t c);

/// sigma_k(n) = sum of d^k over divisors d of n.
mpz_class divisor_sigma(unsigned k, std::int64_t n);

/// Number of positive divisors of n.
std::int64_t divisor_count(std::int64_t n);

/// Euler's totient.
std::int64_t euler_phi(std::int64_t n);

/// Prime factorisation as (p, e) pairs in increasing p.
std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n);

bool is_prime(std::int64_t n);

}  // namespace svp::arith
