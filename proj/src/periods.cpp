#include "svp/periods.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace svp::periods {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kTwoPiI(0.0, 2.0 * kPi);

double agm(double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw SingularCurve("AGM arguments must be positive");
    for (int i = 0; i < 64 && std::abs(a - b) > 1e-17 * a; ++i) {
        const double next = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = next;
    }
    return a;
}

// Newton polish of a real root of 4x^3 + b2 x^2 + 2 b4 x + b6.
double polish(double x, double b2, double b4, double b6) {
    long double r = x;
    for (int i = 0; i < 6; ++i) {
        const long double f = ((4.0L * r + b2) * r + 2.0L * b4) * r + b6;
        const long double df = (12.0L * r + 2.0L * b2) * r + 2.0L * b4;
        if (df == 0.0L) break;
        const long double step = f / df;
        r -= step;
        if (std::fabs(step) <= 1e-19L * std::fabs(r)) break;
    }
    return static_cast<double>(r);
}

// Real roots of 4x^3 + b2 x^2 + 2 b4 x + b6 in decreasing order (one or three).
std::vector<double> real_roots(double b2, double b4, double b6) {
    // x = t - b2/12 gives t^3 + p t + q.
    const double shift = -b2 / 12.0;
    const double p = b4 / 2.0 - b2 * b2 / 48.0;
    const double q = b2 * b2 * b2 / 864.0 - b2 * b4 / 24.0 + b6 / 4.0;
    const double disc = -(4.0 * p * p * p + 27.0 * q * q);
    std::vector<double> roots;
    if (disc > 0.0) {
        const double r = 2.0 * std::sqrt(-p / 3.0);
        const double phi = std::acos(std::clamp(3.0 * q / (p * r), -1.0, 1.0));
        for (int j = 0; j < 3; ++j) roots.push_back(r * std::cos((phi - 2.0 * kPi * j) / 3.0) + shift);
    } else {
        const double sq = std::sqrt(std::max(0.0, q * q / 4.0 + p * p * p / 27.0));
        roots.push_back(std::cbrt(-q / 2.0 + sq) + std::cbrt(-q / 2.0 - sq) + shift);
    }
    for (auto& r : roots) r = polish(r, b2, b4, b6);
    std::sort(roots.begin(), roots.end(), std::greater<>());
    return roots;
}

// Apply the integer change of basis that brings tau into the standard
// fundamental domain. Returns the reduced basis and the matrix M with
// (w1, w2)^t = M (r1, r2)^t.
struct Reduced {
    cplx r1, r2;
    std::array<std::array<long long, 2>, 2> m;
};

Reduced reduce_basis(cplx w1, cplx w2) {
    // Track (w1, w2) = M (r1, r2), starting from M = identity.
    cplx r1 = w1, r2 = w2;
    std::array<std::array<long long, 2>, 2> m = {{{1, 0}, {0, 1}}};
    for (int iter = 0; iter < 1000; ++iter) {
        const cplx tau = r2 / r1;
        const auto t = static_cast<long long>(std::floor(tau.real() + 0.5));
        if (t != 0) {
            // r2 <- r2 - t r1; columns of M absorb the inverse.
            r2 -= static_cast<double>(t) * r1;
            for (auto& row : m) row[0] += t * row[1];
        }
        if (std::norm(r2 / r1) >= 1.0 - 1e-15) break;
        // (r1, r2) <- (r2, -r1) keeps the orientation.
        const cplx old1 = r1;
        r1 = r2;
        r2 = -old1;
        for (auto& row : m) {
            const long long c0 = row[0], c1 = row[1];
            row[0] = c1;
            row[1] = -c0;
        }
    }
    return {r1, r2, m};
}

}  // namespace

cplx eisenstein_value(int weight, cplx tau) {
    if (tau.imag() <= 0.0) throw std::domain_error("tau must lie in the upper half-plane");
    double factor = 0.0;
    int power = 0;
    switch (weight) {
        case 2: factor = -24.0; power = 1; break;
        case 4: factor = 240.0; power = 3; break;
        case 6: factor = -504.0; power = 5; break;
        default: throw std::invalid_argument("eisenstein_value supports weights 2, 4, 6");
    }
    // sum n^power q^n / (1 - q^n)
    const cplx q = std::exp(kTwoPiI * tau);
    cplx sum = 0.0;
    cplx qn = 1.0;
    for (int n = 1; n < 10000; ++n) {
        qn *= q;
        const cplx term = std::pow(static_cast<double>(n), power) * qn / (1.0 - qn);
        sum += term;
        if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum))) break;
    }
    return 1.0 + factor * sum;
}

std::pair<cplx, cplx> curve_periods(const catalog::CurveModel& e) {
    const auto disc = e.discriminant();
    if (disc == 0) throw SingularCurve("curve has zero discriminant");
    const auto b2 = static_cast<double>(e.b2());
    const auto b4 = static_cast<double>(e.b4());
    const auto b6 = static_cast<double>(e.b6());
    const auto roots = real_roots(b2, b4, b6);
    if (disc > 0) {
        if (roots.size() != 3) throw SingularCurve("expected three real 2-division values");
        const double e1 = roots[0], e2 = roots[1], e3 = roots[2];
        const double w1 = kPi / agm(std::sqrt(e1 - e3), std::sqrt(e1 - e2));
        const double w2 = kPi / agm(std::sqrt(e1 - e3), std::sqrt(e2 - e3));
        return {cplx(w1, 0.0), cplx(0.0, w2)};
    }
    const double e1 = roots.front();
    const double a = 3.0 * e1 + b2 / 4.0;
    const double b = std::sqrt(3.0 * e1 * e1 + b2 / 2.0 * e1 + b4 / 2.0);
    const double w1 = 2.0 * kPi / agm(2.0 * std::sqrt(b), std::sqrt(2.0 * b + a));
    const double w2i = kPi / agm(2.0 * std::sqrt(b), std::sqrt(2.0 * b - a));
    return {cplx(w1, 0.0), cplx(w1 / 2.0, w2i)};
}

std::pair<cplx, cplx> weierstrass_quasi_periods(cplx omega1, cplx omega2) {
    if ((omega2 / omega1).imag() <= 0.0) throw std::domain_error("Im(omega2/omega1) must be positive");
    const Reduced red = reduce_basis(omega1, omega2);
    const cplx tau = red.r2 / red.r1;
    // eta_W(r1) = pi^2 E_2(tau) / (3 r1); Legendre: eta(r1) r2 - eta(r2) r1 = 2 pi i.
    const cplx h1 = kPi * kPi * eisenstein_value(2, tau) / (3.0 * red.r1);
    const cplx h2 = (h1 * red.r2 - kTwoPiI) / red.r1;
    const auto& m = red.m;
    return {static_cast<double>(m[0][0]) * h1 + static_cast<double>(m[0][1]) * h2,
            static_cast<double>(m[1][0]) * h1 + static_cast<double>(m[1][1]) * h2};
}

std::pair<cplx, cplx> quasi_periods(cplx omega1, cplx omega2, double shift) {
    const auto [h1, h2] = weierstrass_quasi_periods(omega1, omega2);
    return {-h1 + shift * omega1, -h2 + shift * omega2};
}

PeriodLattice period_lattice(const catalog::CurveModel& e) {
    const auto [w1, w2] = curve_periods(e);
    const auto [h1, h2] = quasi_periods(w1, w2, -static_cast<double>(e.b2()) / 12.0);
    return {w1, w2, h1, h2};
}

RMatrix SVMatrix::block(int row, int col) const {
    RMatrix out(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d)));
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                s[static_cast<std::size_t>(row * d + i)][static_cast<std::size_t>(col * d + j)];
        }
    }
    return out;
}

namespace {

template <class T>
std::vector<std::vector<T>> invert_impl(std::vector<std::vector<T>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<T>> inv(n, std::vector<T>(n, T(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = T(1);
    double scale = 0.0;
    for (const auto& row : a) {
        for (const auto& v : row) scale = std::max(scale, std::abs(v));
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
        }
        if (!(std::abs(a[pivot][col]) > 1e-14 * scale)) throw InconsistentMatrix("matrix is singular");
        std::swap(a[pivot], a[col]);
        std::swap(inv[pivot], inv[col]);
        const T p = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const T f = a[r][col];
            if (f == T(0)) continue;
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

template <class T>
std::vector<std::vector<T>> multiply_impl(const std::vector<std::vector<T>>& a,
                                          const std::vector<std::vector<T>>& b) {
    const std::size_t n = a.size(), k = b.size(), m = b.empty() ? 0 : b[0].size();
    std::vector<std::vector<T>> out(n, std::vector<T>(m, T(0)));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
        }
    }
    return out;
}

double max_abs_diff(const RMatrix& a, const RMatrix& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a[i].size(); ++j) worst = std::max(worst, std::abs(a[i][j] - b[i][j]));
    }
    return worst;
}

RMatrix transpose(const RMatrix& a) {
    RMatrix t(a.empty() ? 0 : a[0].size(), std::vector<double>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
    }
    return t;
}

RMatrix scaled(RMatrix a, double s) {
    for (auto& row : a) {
        for (auto& v : row) v *= s;
    }
    return a;
}

}  // namespace

CMatrix inverse(const CMatrix& m) { return invert_impl(m); }
RMatrix inverse(const RMatrix& m) { return invert_impl(m); }
RMatrix multiply(const RMatrix& a, const RMatrix& b) { return multiply_impl(a, b); }
CMatrix multiply(const CMatrix& a, const CMatrix& b) { return multiply_impl(a, b); }

SVMatrix sv_matrix(const CMatrix& p, int weight) {
    const std::size_t n = p.size();
    if (n == 0 || n % 2 != 0) throw InconsistentMatrix("period matrix must be square of even size");
    for (const auto& row : p) {
        if (row.size() != n) throw InconsistentMatrix("period matrix must be square");
    }
    CMatrix conj = p;
    for (auto& row : conj) {
        for (auto& v : row) v = std::conj(v);
    }
    const CMatrix s = multiply(inverse(p), conj);
    SVMatrix out{RMatrix(n, std::vector<double>(n)), weight, static_cast<int>(n / 2)};
    double worst_imag = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            worst_imag = std::max(worst_imag, std::abs(s[i][j].imag()));
            out.s[i][j] = s[i][j].real();
        }
    }
    if (worst_imag >= 1e-9) {
        throw InconsistentMatrix("P^-1 conj(P) has imaginary part " + std::to_string(worst_imag));
    }
    return out;
}

SVMatrix sv_from_c_rho(double c, double rho, int weight) {
    if (c == 0.0) throw InconsistentMatrix("c must be nonzero");
    const double a = rho * c;
    return {{{a, (1.0 - a * a) / c}, {c, -a}}, weight, 1};
}

double BlockReport::worst() const {
    return std::max({c_symmetric, d_relation, b_relation, ca_relation, involution, trace});
}

BlockReport check_block_relations(const SVMatrix& sv) {
    BlockReport r;
    const RMatrix a = sv.a(), b = sv.b(), c = sv.c(), d = sv.dblock();
    const double sign_n = (sv.weight % 2 == 0) ? 1.0 : -1.0;
    r.c_symmetric = max_abs_diff(c, transpose(c));
    r.d_relation = max_abs_diff(d, scaled(transpose(a), sign_n));
    r.ca_relation = max_abs_diff(multiply(c, a), scaled(multiply(transpose(a), c), -sign_n));
    try {
        RMatrix one_minus = multiply(a, a);
        for (std::size_t i = 0; i < one_minus.size(); ++i) {
            for (std::size_t j = 0; j < one_minus.size(); ++j) one_minus[i][j] = (i == j ? 1.0 : 0.0) - one_minus[i][j];
        }
        r.b_relation = max_abs_diff(b, multiply(one_minus, inverse(c)));
    } catch (const InconsistentMatrix&) {
        r.c_invertible = false;
        r.b_relation = std::numeric_limits<double>::infinity();
    }
    const RMatrix sq = multiply(sv.s, sv.s);
    double inv_res = 0.0, tr = 0.0;
    for (std::size_t i = 0; i < sq.size(); ++i) {
        tr += sv.s[i][i];
        for (std::size_t j = 0; j < sq.size(); ++j) inv_res = std::max(inv_res, std::abs(sq[i][j] - (i == j ? 1.0 : 0.0)));
    }
    r.involution = inv_res;
    r.trace = std::abs(tr);
    return r;
}

}  // namespace svp::periods
