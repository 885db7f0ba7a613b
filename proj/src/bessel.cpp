#include "svp/bessel.hpp"

#include <cmath>
#include <string>

namespace svp::bessel {

namespace {

void check_order(int nu) {
    if (nu < 1) throw OutOfRange("Bessel order must be >= 1, got " + std::to_string(nu));
}

long double leading_term(int nu, long double half_x) {
    long double t = 1.0L;
    for (int i = 1; i <= nu; ++i) t *= half_x / static_cast<long double>(i);
    return t;
}

// sum_j sign^j (x/2)^(nu+2j) / (j! (nu+j)!)
long double ascending_series(int nu, long double x, int sign) {
    const long double h = x / 2.0L;
    const long double h2 = h * h;
    long double term = leading_term(nu, h);
    long double sum = term;
    for (int j = 1; j < 100000; ++j) {
        term *= static_cast<long double>(sign) * h2 /
                (static_cast<long double>(j) * static_cast<long double>(nu + j));
        sum += term;
        if (static_cast<long double>(j) > h && std::fabs(term) <= 1e-22L * std::fabs(sum)) break;
    }
    return sum;
}

// Miller's algorithm: run J_{n-1} = (2n/x) J_n - J_{n+1} downward from a
// start order well past both nu and x, normalising with
// J_0 + 2 (J_2 + J_4 + ...) = 1.
long double miller_j(int nu, long double x) {
    const int base = std::max(nu, static_cast<int>(std::ceil(x)));
    int start = base + 20 + static_cast<int>(std::sqrt(40.0L * base));
    if (start % 2 != 0) ++start;

    constexpr long double kBig = 1e300L;
    constexpr long double kSmall = 1e-300L;
    long double next = 0.0L;  // J_{n+1}
    long double cur = 1e-30L;  // J_n, n = start
    long double norm = 0.0L;
    long double saved = 0.0L;
    const long double two_over_x = 2.0L / x;
    for (int n = start; n > 0; --n) {
        const long double prev = static_cast<long double>(n) * two_over_x * cur - next;
        next = cur;
        cur = prev;  // now J_{n-1}
        if (n - 1 == nu) saved = cur;
        if ((n - 1) % 2 == 0 && n - 1 > 0) norm += 2.0L * cur;
        if (std::fabs(cur) > kBig) {
            cur *= kSmall;
            next *= kSmall;
            norm *= kSmall;
            saved *= kSmall;
        }
    }
    norm += cur;  // J_0
    return saved / norm;
}

}  // namespace

double bessel_j(int nu, double x) {
    check_order(nu);
    if (!(x >= 0.0) || x > kMaxArgumentJ) {
        throw OutOfRange("bessel_j argument outside [0, 1e4]: " + std::to_string(x));
    }
    if (x == 0.0) return 0.0;
    if (x <= kSeriesCrossoverJ) return static_cast<double>(ascending_series(nu, x, -1));
    return static_cast<double>(miller_j(nu, x));
}

double bessel_i(int nu, double x) {
    check_order(nu);
    if (!(x >= 0.0) || x > kMaxArgumentI) {
        throw OutOfRange("bessel_i argument outside [0, 700]: " + std::to_string(x));
    }
    if (x == 0.0) return 0.0;
    return static_cast<double>(ascending_series(nu, x, +1));
}

}  // namespace svp::bessel
