#include "svp/modular_forms.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "svp/arith.hpp"

namespace svp::qexp {

namespace {

mpq_class power(std::int64_t base, unsigned e) {
    mpz_class out;
    mpz_class b = base;
    mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), e);
    return mpq_class(out);
}

mpz_class factorial(unsigned n) {
    mpz_class out;
    mpz_fac_ui(out.get_mpz_t(), n);
    return out;
}

}  // namespace

QSeries euler_product(std::int64_t T) {
    if (T < 0) return QSeries::zero(T);
    std::vector<mpq_class> c(static_cast<std::size_t>(T + 1), mpq_class(0));
    // sum_k (-1)^k q^{k(3k-1)/2} over all integers k.
    for (std::int64_t k = 0;; ++k) {
        const std::int64_t e1 = k * (3 * k - 1) / 2;
        const std::int64_t e2 = k * (3 * k + 1) / 2;
        if (e1 > T) break;
        const int sign = (k % 2 == 0) ? 1 : -1;
        c[static_cast<std::size_t>(e1)] = sign;
        if (k > 0 && e2 <= T) c[static_cast<std::size_t>(e2)] = sign;
    }
    return QSeries::from_coefficients(0, std::move(c), T);
}

QSeries eta_quotient(const std::vector<EtaFactor>& factors, std::int64_t T) {
    std::int64_t weighted = 0;
    for (const auto& [d, r] : factors) {
        if (d < 1) throw std::invalid_argument("eta quotient needs d >= 1, got " + std::to_string(d));
        weighted += d * r;
    }
    if (weighted % 24 != 0) {
        throw std::invalid_argument("eta quotient prefactor q^(" + std::to_string(weighted) +
                                    "/24) is not integral");
    }
    const std::int64_t v0 = weighted / 24;
    const std::int64_t relative = T - v0;
    if (relative < 0) return QSeries::zero(T);
    const QSeries base = euler_product(relative);
    QSeries out = QSeries::monomial(1, 0, relative);
    for (const auto& [d, r] : factors) {
        if (r == 0) continue;
        out *= base.dilate(d).truncate(relative).pow(r);
    }
    return out.shift(v0);
}

QSeries eisenstein(int weight, std::int64_t T) {
    long factor = 0;
    switch (weight) {
        case 2: factor = -24; break;
        case 4: factor = 240; break;
        case 6: factor = -504; break;
        default:
            throw std::invalid_argument("eisenstein supports weights 2, 4, 6; got " + std::to_string(weight));
    }
    if (T < 0) return QSeries::zero(T);
    std::vector<mpq_class> c(static_cast<std::size_t>(T + 1));
    c[0] = 1;
    for (std::int64_t n = 1; n <= T; ++n) {
        c[static_cast<std::size_t>(n)] =
            mpq_class(arith::divisor_sigma(static_cast<unsigned>(weight - 1), n) * factor);
    }
    return QSeries::from_coefficients(0, std::move(c), T);
}

QSeries delta(std::int64_t T) { return eta_quotient({{1, 24}}, T); }

QSeries j_invariant(std::int64_t T) {
    // E_4^3 needs one extra term because dividing by Delta = q + ... drops one.
    const QSeries e4 = eisenstein(4, T + 1);
    return (e4 * e4 * e4) * delta(T + 2).inverse();
}

QSeries bol(const QSeries& h, int k) {
    if (k < 0) throw std::invalid_argument("bol needs k >= 0");
    const auto e = static_cast<unsigned>(k + 1);
    return h.map([e](std::int64_t n, const mpq_class& a) -> mpq_class { return a * power(n, e); });
}

namespace {

QSeries hecke_from(const QSeries& f, std::int64_t p, int k, std::int64_t start) {
    if (!arith::is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (k < 0) throw std::invalid_argument("hecke_tp needs k >= 0");
    const std::int64_t T = f.precision();
    const std::int64_t out_prec = T >= 0 ? T / p : -((-T + p - 1) / p);
    if (start > out_prec) return QSeries::zero(out_prec);
    const mpq_class pk = power(p, static_cast<unsigned>(k + 1));
    std::vector<mpq_class> c(static_cast<std::size_t>(out_prec - start + 1));
    for (std::int64_t n = start; n <= out_prec; ++n) {
        mpq_class v = f.coeff(p * n);
        if (arith::mod(n, p) == 0) v += pk * f.coeff(n / p);
        c[static_cast<std::size_t>(n - start)] = v;
    }
    return QSeries::from_coefficients(start, std::move(c), out_prec);
}

}  // namespace

QSeries hecke_tp(const QSeries& f, std::int64_t p, int k) {
    if (!f.is_zero() && f.valuation() < 1) {
        throw std::invalid_argument("hecke_tp expects a cusp expansion (valuation >= 1)");
    }
    return hecke_from(f, p, k, 1);
}

QSeries hecke_tp_laurent(const QSeries& f, std::int64_t p, int k) {
    const std::int64_t v = f.is_zero() ? 1 : std::min<std::int64_t>(f.valuation(), 1);
    return hecke_from(f, p, k, p * v);
}

PrincipalPart principal_part(const QSeries& f) {
    if (f.precision() < 0) {
        throw TruncationError("principal part needs the series up to q^0, known only to q^" +
                              std::to_string(f.precision()));
    }
    PrincipalPart out;
    for (const auto& [n, a] : f.terms()) {
        if (n > 0) break;
        out.coeffs.emplace(n, a);
    }
    return out;
}

mpq_class de_rham_pairing(const QSeries& f, const QSeries& g, int k) {
    if (k < 0) throw std::invalid_argument("de_rham_pairing needs k >= 0");
    if (f.is_zero() || g.is_zero()) {
        // Nothing is known to be nonzero; the windows still have to reach the
        // region where the other operand could be nonzero.
        if (f.precision() < -g.valuation() || g.precision() < -f.valuation()) {
            throw TruncationError("truncation too short to certify a finite pairing");
        }
        return 0;
    }
    if (f.precision() < -g.valuation() || g.precision() < -f.valuation()) {
        throw TruncationError("truncation too short to certify a finite pairing: need T(f) >= " +
                              std::to_string(-g.valuation()) + " and T(g) >= " +
                              std::to_string(-f.valuation()));
    }
    const auto e = static_cast<unsigned>(k + 1);
    mpq_class sum = 0;
    for (std::int64_t n = f.valuation(); n <= -g.valuation(); ++n) {
        if (n == 0) continue;
        const mpq_class af = f.coeff(n);
        if (af == 0) continue;
        const mpq_class ag = g.coeff(-n);
        if (ag == 0) continue;
        sum += af * ag / power(n, e);
    }
    return sum * mpq_class(factorial(e - 1));
}

bool is_level1_rank_two_weight(int weight) {
    switch (weight) {
        case 12: case 16: case 18: case 20: case 22: case 26: return true;
        default: return false;
    }
}

std::vector<mpq_class> solve_exact(std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw std::invalid_argument("solve_exact: dimension mismatch");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a[pivot][col] == 0) ++pivot;
        if (pivot == n) throw std::domain_error("solve_exact: singular matrix");
        std::swap(a[pivot], a[col]);
        std::swap(b[pivot], b[col]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || a[row][col] == 0) continue;
            const mpq_class factor = a[row][col] / a[col][col];
            for (std::size_t j = col; j < n; ++j) a[row][j] -= factor * a[col][j];
            b[row] -= factor * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

QSeries dual_form_level1(int weight, std::int64_t T) {
    if (!is_level1_rank_two_weight(weight)) {
        throw std::invalid_argument("weight " + std::to_string(weight) +
                                    " has no one-dimensional level-1 cusp space");
    }
    const int k = weight - 2;
    const int target = weight + 12;
    const std::int64_t work = std::max<std::int64_t>(T, 1);
    // Delta^-1 needs one extra term of the holomorphic numerator.
    const QSeries e4 = eisenstein(4, work + 1);
    const QSeries e6 = eisenstein(6, work + 1);
    const QSeries inv_delta = delta(work + 2).inverse();
    std::vector<QSeries> basis;
    for (int b = target / 4; b >= 0; --b) {
        const int rest = target - 4 * b;
        if (rest % 6 != 0) continue;
        basis.push_back(e4.pow(b) * e6.pow(rest / 6) * inv_delta);
    }
    if (basis.size() != 3) throw std::logic_error("unexpected basis size for dual form");
    std::vector<std::vector<mpq_class>> a(3, std::vector<mpq_class>(3));
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) a[i][j] = basis[j].coeff(static_cast<std::int64_t>(i) - 1);
    }
    std::vector<mpq_class> rhs = {mpq_class(1) / mpq_class(factorial(static_cast<unsigned>(k))), 0, 0};
    const auto x = solve_exact(a, rhs);
    QSeries g = QSeries::zero(work);
    for (std::size_t j = 0; j < 3; ++j) g += basis[j] * x[j];
    return g.truncate(T);
}

QSeries hecke_tn(const QSeries& f, std::int64_t n, int k) {
    if (n < 1) throw std::invalid_argument("hecke_tn needs n >= 1");
    if (!f.is_zero() && f.valuation() < 1) {
        throw std::invalid_argument("hecke_tn expects a cusp expansion (valuation >= 1)");
    }
    const std::int64_t out_prec = f.precision() / n;
    if (out_prec < 1) return QSeries::zero(out_prec);
    std::vector<mpq_class> c(static_cast<std::size_t>(out_prec));
    for (std::int64_t j = 1; j <= out_prec; ++j) {
        mpq_class v = 0;
        const std::int64_t g = arith::gcd(n, j);
        for (std::int64_t d = 1; d <= g; ++d) {
            if (g % d != 0) continue;
            v += power(d, static_cast<unsigned>(k + 1)) * f.coeff(n * j / (d * d));
        }
        c[static_cast<std::size_t>(j - 1)] = v;
    }
    return QSeries::from_coefficients(1, std::move(c), out_prec);
}

int level1_modular_dim(int weight) {
    if (weight < 0 || weight % 2 != 0) return 0;
    if (weight == 2) return 0;
    return weight % 12 == 2 ? weight / 12 : weight / 12 + 1;
}

int level1_cusp_dim(int weight) {
    if (weight < 12) return 0;
    return level1_modular_dim(weight) - 1;
}

std::vector<QSeries> level1_cusp_basis(int weight, std::int64_t T) {
    const int d = level1_cusp_dim(weight);
    if (d == 0) return {};
    if (T < d) throw std::invalid_argument("level1_cusp_basis needs T >= dimension");
    // Delta^i E_4^a E_6^b with 4a + 6b = weight - 12 i, i = 1..d, has valuation i.
    const QSeries e4 = eisenstein(4, T);
    const QSeries e6 = eisenstein(6, T);
    const QSeries del = delta(T);
    std::vector<QSeries> basis;
    for (int i = 1; i <= d; ++i) {
        const int rest = weight - 12 * i;
        int a = -1, b = -1;
        for (int bb = 0; 6 * bb <= rest; ++bb) {
            if ((rest - 6 * bb) % 4 == 0) {
                a = (rest - 6 * bb) / 4;
                b = bb;
                break;
            }
        }
        if (a < 0) throw std::logic_error("no Eisenstein monomial of weight " + std::to_string(rest));
        basis.push_back(del.pow(i) * e4.pow(a) * e6.pow(b));
    }
    // Clear q^j for j != i from b_i, working upwards.
    for (int i = d - 1; i >= 0; --i) {
        for (int j = i + 1; j < d; ++j) {
            const mpq_class coeff = basis[static_cast<std::size_t>(i)].coeff(j + 1);
            if (coeff != 0) basis[static_cast<std::size_t>(i)] -= basis[static_cast<std::size_t>(j)] * coeff;
        }
    }
    return basis;
}

mpq_class eta_order_at_cusp(const std::vector<EtaFactor>& factors, std::int64_t N, std::int64_t c) {
    if (N < 1 || c < 1 || N % c != 0) throw std::invalid_argument("cusp denominator must divide the level");
    // Ligozat's formula; gcd(c^2, N) = c gcd(c, N/c) for c | N.
    mpq_class sum = 0;
    for (const auto& [d, r] : factors) {
        if (N % d != 0) throw std::invalid_argument("eta factor level does not divide N");
        const std::int64_t g = arith::gcd(d, c);
        mpq_class term(g * g * r, d);
        term.canonicalize();
        sum += term;
    }
    mpq_class scale(N, 24 * arith::gcd(c * c, N));
    scale.canonicalize();
    return sum * scale;
}

std::vector<EtaFactor> hauptmodul_recipe(std::int64_t N) {
    switch (N) {
        case 2: return {{1, 24}, {2, -24}};
        case 3: return {{1, 12}, {3, -12}};
        case 4: return {{1, 8}, {4, -8}};
        case 5: return {{1, 6}, {5, -6}};
        case 6: return {{1, 5}, {2, -1}, {3, 1}, {6, -5}};
        case 7: return {{1, 4}, {7, -4}};
        case 8: return {{1, 4}, {2, -2}, {4, 2}, {8, -4}};
        case 9: return {{1, 3}, {9, -3}};
        default: throw std::invalid_argument("no Hauptmodul recipe for level " + std::to_string(N));
    }
}

}  // namespace svp::qexp
