#include "svp/rational.hpp"

#include <cmath>
#include <stdexcept>

#include "svp/arith.hpp"

namespace svp::rational {

std::string Reconstruction::to_string() const {
    return den == 1 ? std::to_string(num) : std::to_string(num) + "/" + std::to_string(den);
}

Reconstruction reconstruct(double x, std::int64_t max_den) {
    if (max_den < 1) throw std::invalid_argument("denominator cap must be >= 1");
    if (!std::isfinite(x)) throw std::invalid_argument("cannot reconstruct a non-finite value");
    const double fl = std::floor(x);
    if (std::abs(fl) > 9e15) throw std::invalid_argument("value too large for rational reconstruction");
    // Continued fraction of the fractional part; convergents p/q.
    const double frac = x - fl;
    long double r = frac;
    std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;  // p_{-2}/q_{-2}, p_{-1}/q_{-1}
    std::int64_t best_p = 0, best_q = 1;
    for (int iter = 0; iter < 64; ++iter) {
        const auto a = static_cast<std::int64_t>(std::floor(r));
        if (q1 != 0 && a > (max_den - q0) / q1) {
            // Semiconvergent (p0 + t p1)/(q0 + t q1) with the largest admissible t.
            const std::int64_t t = (max_den - q0) / q1;
            const std::int64_t sp = p0 + t * p1, sq = q0 + t * q1;
            const double d_semi = std::abs(frac - static_cast<double>(sp) / static_cast<double>(sq));
            const double d_conv = std::abs(frac - static_cast<double>(p1) / static_cast<double>(q1));
            if (t > 0 && d_semi < d_conv) {
                best_p = sp;
                best_q = sq;
            } else {
                best_p = p1;
                best_q = q1;
            }
            break;
        }
        const std::int64_t p2 = a * p1 + p0, q2 = a * q1 + q0;
        p0 = p1; q0 = q1; p1 = p2; q1 = q2;
        best_p = p1;
        best_q = q1;
        const long double rest = r - static_cast<long double>(a);
        if (rest < 1e-18L) break;
        r = 1.0L / rest;
    }
    Reconstruction out;
    out.den = best_q;
    out.num = best_p + static_cast<std::int64_t>(fl) * best_q;
    out.distance = std::abs(frac - static_cast<double>(best_p) / static_cast<double>(best_q));
    const std::int64_t g = arith::gcd(out.num, out.den);
    if (g > 1) {
        out.num /= g;
        out.den /= g;
    }
    return out;
}

std::int64_t denominator_cap(double tol, double coverage) {
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    std::int64_t q = 1;
    double covered = 2.0 * tol;  // q = 1
    for (;;) {
        const double next = covered + 2.0 * tol * static_cast<double>(arith::euler_phi(q + 1));
        if (next > coverage || q >= (std::int64_t{1} << 40)) return q;
        covered = next;
        ++q;
    }
}

}  // namespace svp::rational
