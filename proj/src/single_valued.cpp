#include "svp/single_valued.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "svp/modular_forms.hpp"

namespace svp::sv {

using catalog::RankTwoCase;
using poincare::Control;
using qexp::QSeries;

namespace {

constexpr double kPi = std::numbers::pi;

mpz_class factorial(int n) {
    mpz_class out;
    mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
    return out;
}

mpz_class ipow(std::int64_t base, int e) {
    mpz_class out;
    const mpz_class b = base;
    mpz_pow_ui(out.get_mpz_t(), b.get_mpz_t(), static_cast<unsigned long>(e));
    return out;
}

double to_double(const mpq_class& q) { return q.get_d(); }

std::vector<poincare::Coefficient> coefficients(std::int64_t m, int weight, std::int64_t N,
                                                const std::vector<std::int64_t>& ns, const Control& control) {
    auto out = poincare::poincare_coeffs(m, weight, N, ns, control);
    if (control.tol > 0.0) {
        for (const auto& c : out) {
            if (!c.converged) {
                throw ToleranceNotMet("P_{" + std::to_string(m) + "," + std::to_string(weight) + "," +
                                      std::to_string(N) + "}: tolerance not reached by c = " +
                                      std::to_string(c.c_max));
            }
        }
    }
    return out;
}

std::vector<std::int64_t> range(std::int64_t lo, std::int64_t hi) {
    std::vector<std::int64_t> out;
    for (std::int64_t n = lo; n <= hi; ++n) out.push_back(n);
    return out;
}

double relative(double value, double scale) { return value / std::max(std::abs(scale), 1e-300); }

// Exact solve of an overdetermined but consistent system A x = b.
std::vector<mpq_class> solve_consistent(std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> b) {
    const std::size_t rows = a.size();
    const std::size_t cols = rows == 0 ? 0 : a.front().size();
    std::size_t r = 0;
    std::vector<std::size_t> pivots;
    for (std::size_t col = 0; col < cols && r < rows; ++col) {
        std::size_t p = r;
        while (p < rows && a[p][col] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        std::swap(b[p], b[r]);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][col] == 0) continue;
            const mpq_class f = a[i][col] / a[r][col];
            for (std::size_t j = col; j < cols; ++j) a[i][j] -= f * a[r][j];
            b[i] -= f * b[r];
        }
        pivots.push_back(col);
        ++r;
    }
    if (pivots.size() != cols) throw std::domain_error("relation system is rank deficient");
    for (std::size_t i = r; i < rows; ++i) {
        if (b[i] != 0) throw std::domain_error("relation system is inconsistent");
    }
    std::vector<mpq_class> x(cols);
    for (std::size_t i = 0; i < cols; ++i) x[pivots[i]] = b[i] / a[i][pivots[i]];
    return x;
}

// Smallest E_4^a E_6^b of the given weight with constant term 1.
QSeries eisenstein_monomial(int weight, std::int64_t T) {
    if (weight == 0) return QSeries::monomial(1, 0, T);
    for (int b = 0; 6 * b <= weight; ++b) {
        if ((weight - 6 * b) % 4 == 0) {
            return qexp::eisenstein(4, T).pow((weight - 6 * b) / 4) * qexp::eisenstein(6, T).pow(b);
        }
    }
    throw std::logic_error("no level-1 modular form of weight " + std::to_string(weight));
}

std::vector<std::pair<int, int>> eisenstein_exponents(int weight) {
    std::vector<std::pair<int, int>> out;
    for (int b = 0; 6 * b <= weight; ++b) {
        if ((weight - 6 * b) % 4 == 0) out.emplace_back((weight - 6 * b) / 4, b);
    }
    return out;
}

// Delta^-p known up to q^T.
QSeries inverse_delta_power(std::int64_t p, std::int64_t T) { return qexp::delta(T + p + 1).pow(-p); }

// Level-1 forms of weight k + 2 with poles of order <= d and a_0 = 0,
// coordinates (a_-d, ..., a_-1, a_1, ..., a_d). Nothing of weight -k with
// such poles exists, so this space is the cuspidal de Rham space.
class ClassSpace {
public:
    ClassSpace(int weight, int d, std::int64_t T) : k_(weight - 2), d_(d) {
        const auto exps = eisenstein_exponents(weight + 12 * d);
        if (static_cast<int>(exps.size()) != 2 * d + 1) {
            throw std::logic_error("unexpected dimension for the class space");
        }
        const QSeries e4 = qexp::eisenstein(4, T + d);
        const QSeries e6 = qexp::eisenstein(6, T + d);
        const QSeries inv = inverse_delta_power(d, T);
        std::vector<QSeries> spanning;
        for (const auto& [a, b] : exps) spanning.push_back(inv * e4.pow(a) * e6.pow(b));
        const int size = 2 * d + 1;
        std::vector<std::vector<mpq_class>> mat(static_cast<std::size_t>(size), std::vector<mpq_class>(static_cast<std::size_t>(size)));
        for (int row = 0; row < size; ++row) {
            for (int col = 0; col < size; ++col) {
                mat[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] =
                    spanning[static_cast<std::size_t>(col)].coeff(row - d);
            }
        }
        for (int e : exponents()) {
            std::vector<mpq_class> rhs(static_cast<std::size_t>(size), 0);
            rhs[static_cast<std::size_t>(e + d)] = 1;
            const auto x = qexp::solve_exact(mat, rhs);
            QSeries form = QSeries::zero(T);
            for (int col = 0; col < size; ++col) form += spanning[static_cast<std::size_t>(col)] * x[static_cast<std::size_t>(col)];
            basis_.push_back(form);
        }
    }

    std::vector<int> exponents() const {
        std::vector<int> out;
        for (int e = -d_; e <= d_; ++e) {
            if (e != 0) out.push_back(e);
        }
        return out;
    }

    std::vector<mpq_class> coordinates(const QSeries& f) const {
        if (f.coeff(0) != 0) throw std::logic_error("class space element with nonzero constant term");
        std::vector<mpq_class> out;
        for (int e : exponents()) out.push_back(f.coeff(e));
        return out;
    }

    // T_p followed by removal of the poles of order > d with D^(k+1)(Delta^-P m_P).
    std::vector<std::vector<mpq_class>> hecke_matrix(std::int64_t p) const {
        const auto n = static_cast<std::size_t>(2 * d_);
        std::vector<std::vector<mpq_class>> out(n, std::vector<mpq_class>(n));
        for (std::size_t col = 0; col < n; ++col) {
            QSeries g = qexp::hecke_tp_laurent(basis_[col], p, k_);
            const std::int64_t prec = g.precision();
            for (std::int64_t pole = p * d_; pole > d_; --pole) {
                const mpq_class a = g.coeff(-pole);
                if (a == 0) continue;
                const QSeries h = inverse_delta_power(pole, prec + pole) *
                                  eisenstein_monomial(static_cast<int>(12 * pole - k_), prec + pole);
                const QSeries dh = qexp::bol(h, k_).truncate(prec);
                const mpq_class lead = mpq_class(ipow(-pole, k_ + 1));
                g -= dh * mpq_class(a / lead);
            }
            const auto coords = coordinates(g);
            for (std::size_t row = 0; row < n; ++row) out[row][col] = coords[row];
        }
        return out;
    }

    // Coefficients a_1..a_nmax of the element with the given coordinates.
    std::vector<double> expand(const std::vector<double>& coords, std::int64_t n_max) const {
        std::vector<double> out(static_cast<std::size_t>(n_max), 0.0);
        for (std::size_t i = 0; i < basis_.size(); ++i) {
            for (std::int64_t n = 1; n <= n_max; ++n) {
                out[static_cast<std::size_t>(n - 1)] += coords[i] * to_double(basis_[i].coeff(n));
            }
        }
        return out;
    }

    int d() const { return d_; }
    int k() const { return k_; }

private:
    int k_;
    int d_;
    std::vector<QSeries> basis_;
};

Eigen::MatrixXd to_eigen(const std::vector<std::vector<mpq_class>>& m) {
    const auto rows = static_cast<Eigen::Index>(m.size());
    const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(m.front().size());
    Eigen::MatrixXd out(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = to_double(m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
    return out;
}

}  // namespace

std::string to_string(Route r) { return r == Route::periods ? "periods" : "poincare"; }

periods::SVMatrix RankTwoResult::matrix(int weight) const {
    if (!has_c || !has_rho) throw std::logic_error("S needs both c and rho");
    return periods::sv_from_c_rho(c, rho, weight - 1);
}

Control default_control(const RankTwoCase& c) {
    Control out;
    if (c.weight == 2) {
        out.c_max = 100000;
    } else {
        out.tol = 1e-6;
    }
    return out;
}

RankTwoResult rank2_c_from_poincare(const RankTwoCase& c,
                                    const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs,
                                    const Control& control) {
    catalog::require_case(c.level, c.weight);
    if (pairs.empty()) throw std::invalid_argument("rank2_c_from_poincare needs at least one (m, n) pair");
    const int k = c.weight - 2;
    std::int64_t top = 1;
    std::map<std::int64_t, std::vector<std::int64_t>> by_m;
    for (const auto& [m, n] : pairs) {
        if (m < 1 || n < 1) throw std::invalid_argument("pairs need m, n >= 1");
        top = std::max({top, m, n});
        auto& ns = by_m[m];
        if (std::find(ns.begin(), ns.end(), n) == ns.end()) ns.push_back(n);
    }
    const QSeries f = catalog::newform_qexp(c, top);
    std::map<std::pair<std::int64_t, std::int64_t>, poincare::Coefficient> values;
    for (const auto& [m, ns] : by_m) {
        const auto coeffs = coefficients(m, c.weight, c.level, ns, control);
        for (std::size_t i = 0; i < ns.size(); ++i) values[{m, ns[i]}] = coeffs[i];
    }
    const double kfact = factorial(k).get_d();
    struct Estimate {
        std::int64_t m, n;
        double c, rel_tail;
    };
    std::vector<Estimate> estimates;
    RankTwoResult out;
    out.route = Route::poincare;
    for (const auto& [m, n] : pairs) {
        const auto& v = values.at({m, n});
        const double am = to_double(f.coeff(m));
        const double an = to_double(f.coeff(n));
        if (am * an == 0.0) {
            out.residuals.push_back({m, n, v.value, v.tail_estimate});
            continue;
        }
        const double est = -kfact * am * an / (ipow(m, k + 1).get_d() * v.value);
        const double rel = v.value == 0.0 ? std::numeric_limits<double>::infinity() : v.tail_estimate / std::abs(v.value);
        estimates.push_back({m, n, est, rel});
    }
    if (estimates.empty()) throw std::domain_error("every pair has a_m(f) a_n(f) = 0");
    const auto best = std::min_element(estimates.begin(), estimates.end(),
                                       [](const Estimate& a, const Estimate& b) { return a.rel_tail < b.rel_tail; });
    out.c = best->c;
    out.has_c = true;
    for (const auto& e : estimates) {
        out.residuals.push_back({e.m, e.n, relative(e.c - out.c, out.c), e.rel_tail + best->rel_tail});
    }
    out.note = "c from pair (" + std::to_string(best->m) + ", " + std::to_string(best->n) + ")";
    return out;
}

QSeries weierstrass_x_series(const catalog::CurveModel& e, const QSeries& f, std::int64_t T) {
    if (f.valuation() != 1 || f.coeff(1) != 1) throw std::invalid_argument("x series needs a normalized cusp form");
    if (f.precision() < T + 3) {
        throw qexp::TruncationError("x series up to q^" + std::to_string(T) + " needs f up to q^" +
                                    std::to_string(T + 3));
    }
    const QSeries z = f.map([](std::int64_t n, const mpq_class& a) { return mpq_class(a / n); });
    const mpq_class g2 = mpq_class(e.c4()) / 12;
    const mpq_class g3 = mpq_class(e.c6()) / 216;
    // wp(z) = z^-2 + sum_{j >= 2} c_j z^(2j - 2).
    const std::int64_t jmax = (T + 2) / 2;
    std::vector<mpq_class> cj(static_cast<std::size_t>(std::max<std::int64_t>(jmax, 3) + 1), 0);
    cj[2] = g2 / 20;
    cj[3] = g3 / 28;
    for (std::int64_t j = 4; j <= jmax; ++j) {
        mpq_class s = 0;
        for (std::int64_t m = 2; m <= j - 2; ++m) s += cj[static_cast<std::size_t>(m)] * cj[static_cast<std::size_t>(j - m)];
        cj[static_cast<std::size_t>(j)] = mpq_class(3 * s / ((2 * j + 1) * (j - 3)));
    }
    QSeries x = z.pow(-2);
    const QSeries z2 = z * z;
    QSeries zp = z2;
    for (std::int64_t j = 2; j <= jmax; ++j) {
        x += zp * cj[static_cast<std::size_t>(j)];
        zp *= z2;
    }
    x -= QSeries::monomial(mpq_class(e.b2()) / 12, 0, x.precision());
    return x.truncate(T);
}

QSeries hauptmodul(std::int64_t N, std::int64_t T) { return qexp::eta_quotient(qexp::hauptmodul_recipe(N), T); }

QSeries dual_form(const RankTwoCase& c, std::int64_t T) {
    catalog::require_case(c.level, c.weight);
    const int k = c.weight - 2;
    if (c.level == 1) return qexp::dual_form_level1(c.weight, T);
    if (c.weight == 2) {
        const auto e = catalog::curve_model(c.level);
        const QSeries f = catalog::newform_qexp(c, T + 3);
        return (weierstrass_x_series(e, f, T - 1) * f).truncate(T);
    }
    if (c.level > 9) {
        throw RouteUnavailable("no dual form construction for level " + std::to_string(c.level) + " weight " +
                               std::to_string(c.weight));
    }
    const QSeries t = hauptmodul(c.level, T);
    const QSeries f = catalog::newform_qexp(c, T + 2);
    const std::vector<QSeries> span = {(t * t * f).truncate(T), (t * f).truncate(T), f.truncate(T)};
    std::vector<std::vector<mpq_class>> a(3, std::vector<mpq_class>(3));
    for (int row = 0; row < 3; ++row) {
        for (int col = 0; col < 3; ++col) a[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] = span[static_cast<std::size_t>(col)].coeff(row - 1);
    }
    const auto x = qexp::solve_exact(a, {mpq_class(1, factorial(k)), 0, 0});
    return span[0] * x[0] + span[1] * x[1] + span[2] * x[2];
}

RankTwoResult rank2_rho_poincare(const RankTwoCase& c, const std::optional<QSeries>& g_in, std::int64_t n_max,
                                 const Control& control) {
    catalog::require_case(c.level, c.weight);
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    const int k = c.weight - 2;
    const mpz_class kf = factorial(k);
    const QSeries g = g_in ? *g_in : dual_form(c, n_max);
    if (g.valuation() != -1 || g.coeff(-1) != mpq_class(1, kf)) {
        throw std::invalid_argument("dual form must be q^-1/k! + O(1)");
    }
    const QSeries f = catalog::newform_qexp(c, n_max);
    const auto pm = coefficients(-1, c.weight, c.level, range(1, n_max), control);
    const double kfd = kf.get_d();
    RankTwoResult out = rank2_c_from_poincare(c, {{1, 1}}, control);
    out.residuals.clear();
    out.route = Route::poincare;
    out.rho = pm[0].value / kfd - to_double(g.coeff(1));
    out.has_rho = true;
    for (std::int64_t n = 2; n <= n_max; ++n) {
        const auto& v = pm[static_cast<std::size_t>(n - 1)];
        const double predicted = to_double(f.coeff(n)) * out.rho + to_double(g.coeff(n));
        const double scale = std::max(std::abs(v.value / kfd), 1.0);
        out.residuals.push_back({-1, n, (v.value / kfd - predicted) / scale,
                                 (v.tail_estimate + std::abs(to_double(f.coeff(n))) * pm[0].tail_estimate) / kfd / scale});
    }
    out.note = "rho from a_1(P_-1); residuals (a_n(P_-1)/k! - a_n(f) rho - a_n(g)) / max(|a_n(P_-1)/k!|, 1)";
    return out;
}

RankTwoResult rank2_periods(const RankTwoCase& c) {
    catalog::require_case(c.level, c.weight);
    if (c.weight != 2) {
        throw RouteUnavailable("the period route needs a weight-2 case with a curve model");
    }
    const auto lattice = periods::period_lattice(catalog::curve_model(c.level));
    const auto p = lattice.matrix();
    const auto s = periods::sv_matrix(p, 1);
    RankTwoResult out;
    out.route = Route::periods;
    out.c = s.s[1][0];
    out.rho = s.s[0][0] / s.s[1][0];
    out.has_c = out.has_rho = true;
    const periods::cplx det = p[0][0] * p[1][1] - p[0][1] * p[1][0];
    out.residuals.push_back({0, 0, std::abs(det - periods::cplx(0.0, 2.0 * kPi)), 0.0});
    out.residuals.push_back({0, 1, periods::check_block_relations(s).worst(), 0.0});
    out.note = "residuals: |det P - 2 pi i|, worst block relation";
    return out;
}

PeriodPrediction predicted_coeffs_from_periods(const catalog::CurveModel& e) {
    const auto lat = periods::period_lattice(e);
    const periods::cplx w1 = lat.omega1, w2 = lat.omega2, h1 = lat.eta1, h2 = lat.eta2;
    const periods::cplx denom = w1 * std::conj(w2) - std::conj(w1) * w2;
    const periods::cplx p1 = periods::cplx(0.0, -2.0 * kPi) / denom;
    const periods::cplx ratio = (std::conj(w1) * h2 - std::conj(w2) * h1) / denom;
    const QSeries f = catalog::curve_qexp(e, 6);
    const QSeries xf = weierstrass_x_series(e, f, 2) * f;
    PeriodPrediction out;
    out.a1_p1 = p1.real();
    out.imag_p1 = p1.imag();
    out.a1_pm1 = ratio.real() + to_double(xf.coeff(1));
    return out;
}

std::vector<std::vector<mpq_class>> level1_hecke_matrix(int weight, std::int64_t n) {
    const int d = qexp::level1_cusp_dim(weight);
    if (d == 0) throw std::invalid_argument("no cusp forms of weight " + std::to_string(weight));
    const auto basis = qexp::level1_cusp_basis(weight, n * d);
    std::vector<std::vector<mpq_class>> out(static_cast<std::size_t>(d), std::vector<mpq_class>(static_cast<std::size_t>(d)));
    for (int j = 0; j < d; ++j) {
        const QSeries image = qexp::hecke_tn(basis[static_cast<std::size_t>(j)], n, weight - 2);
        for (int i = 0; i < d; ++i) out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = image.coeff(i + 1);
    }
    return out;
}

std::vector<mpq_class> exact_lambda_level1(int weight, std::int64_t m, const std::vector<std::int64_t>& basis) {
    const int k = weight - 2;
    auto scaled = [&](std::int64_t n) {
        auto mat = level1_hecke_matrix(weight, n);
        const mpq_class s(1, ipow(n, k + 1));
        for (auto& row : mat) {
            for (auto& x : row) x *= s;
        }
        return mat;
    };
    const auto target = scaled(m);
    const std::size_t d = target.size();
    std::vector<std::vector<std::vector<mpq_class>>> ops;
    for (auto mi : basis) ops.push_back(scaled(mi));
    std::vector<std::vector<mpq_class>> a;
    std::vector<mpq_class> b;
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            std::vector<mpq_class> row;
            for (const auto& op : ops) row.push_back(op[i][j]);
            a.push_back(row);
            b.push_back(target[i][j]);
        }
    }
    return solve_consistent(a, b);
}

RelationResult poincare_rational_relations(std::int64_t N, int weight, std::int64_t m,
                                           const std::vector<std::int64_t>& basis, std::int64_t n_max,
                                           const Control& control) {
    const auto d = static_cast<std::int64_t>(basis.size());
    if (d == 0) throw std::invalid_argument("empty basis");
    if (n_max < d) throw std::invalid_argument("n_max must be at least the basis size");
    const auto ns = range(1, n_max);
    const auto target = coefficients(m, weight, N, ns, control);
    std::vector<std::vector<poincare::Coefficient>> cols;
    for (auto mi : basis) cols.push_back(coefficients(mi, weight, N, ns, control));
    periods::RMatrix a(static_cast<std::size_t>(d), std::vector<double>(static_cast<std::size_t>(d)));
    for (std::int64_t n = 0; n < d; ++n) {
        for (std::int64_t i = 0; i < d; ++i) {
            a[static_cast<std::size_t>(n)][static_cast<std::size_t>(i)] = cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)].value;
        }
    }
    periods::RMatrix inv;
    try {
        inv = periods::inverse(a);
    } catch (const periods::InconsistentMatrix&) {
        throw std::domain_error("coefficient matrix of the basis Poincare series is singular");
    }
    RelationResult out;
    out.lambda.assign(static_cast<std::size_t>(d), 0.0);
    for (std::int64_t i = 0; i < d; ++i) {
        for (std::int64_t n = 0; n < d; ++n) {
            out.lambda[static_cast<std::size_t>(i)] += inv[static_cast<std::size_t>(i)][static_cast<std::size_t>(n)] * target[static_cast<std::size_t>(n)].value;
        }
    }
    for (double l : out.lambda) out.reconstructed.push_back(rational::reconstruct(l, 10000));
    for (std::int64_t n = d + 1; n <= n_max; ++n) {
        const auto idx = static_cast<std::size_t>(n - 1);
        double fit = 0.0;
        double tails = target[idx].tail_estimate;
        for (std::int64_t i = 0; i < d; ++i) {
            fit += out.lambda[static_cast<std::size_t>(i)] * cols[static_cast<std::size_t>(i)][idx].value;
            tails += std::abs(out.lambda[static_cast<std::size_t>(i)]) * cols[static_cast<std::size_t>(i)][idx].tail_estimate;
        }
        out.residuals.push_back({m, n, relative(target[idx].value - fit, target[idx].value),
                                 relative(tails, target[idx].value)});
    }
    if (N == 1) {
        try {
            out.exact = exact_lambda_level1(weight, m, basis);
        } catch (const std::domain_error&) {
            out.exact = std::nullopt;
        }
    }
    return out;
}

HeckeSplitResult hecke_split_sv(std::int64_t N, int weight, std::int64_t n_max, const Control& control) {
    if (N != 1) throw RouteUnavailable("the Hecke split is implemented at level 1 only");
    const int d = qexp::level1_cusp_dim(weight);
    if (d == 0) throw std::invalid_argument("no cusp forms of weight " + std::to_string(weight));
    if (n_max < d) throw std::invalid_argument("n_max must be at least the dimension");
    const int k = weight - 2;
    const double kfact = factorial(k).get_d();
    const auto ud = static_cast<std::size_t>(d);

    // Newforms from the eigenvectors of T_2 on the echelon basis.
    const Eigen::MatrixXd t2 = to_eigen(level1_hecke_matrix(weight, 2));
    Eigen::EigenSolver<Eigen::MatrixXd> solver(t2);
    std::vector<std::pair<double, Eigen::VectorXd>> eig;
    for (Eigen::Index i = 0; i < t2.rows(); ++i) {
        const Eigen::VectorXd v = solver.eigenvectors().col(i).real();
        eig.emplace_back(solver.eigenvalues()(i).real(), v / v(0));
    }
    std::sort(eig.begin(), eig.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    const auto cusp_basis = qexp::level1_cusp_basis(weight, n_max);
    HeckeSplitResult out;
    out.forms.resize(ud);
    for (std::size_t i = 0; i < ud; ++i) {
        auto& coeffs = out.forms[i].coeffs;
        coeffs.assign(static_cast<std::size_t>(n_max), 0.0);
        for (std::size_t j = 0; j < ud; ++j) {
            for (std::int64_t n = 1; n <= n_max; ++n) {
                coeffs[static_cast<std::size_t>(n - 1)] += eig[i].second(static_cast<Eigen::Index>(j)) * to_double(cusp_basis[j].coeff(n));
            }
        }
    }
    auto a = [&](std::size_t i, std::int64_t n) { return out.forms[i].coeffs[static_cast<std::size_t>(n - 1)]; };

    // Poincare data for m = +-1..+-d.
    const auto ns = range(1, n_max);
    std::vector<std::vector<poincare::Coefficient>> pos, neg;
    for (std::int64_t m = 1; m <= d; ++m) {
        pos.push_back(coefficients(m, weight, N, ns, control));
        neg.push_back(coefficients(-m, weight, N, ns, control));
    }

    // x_i = 1/c_i from a_n(P_m) = -(k!/m^(k+1)) sum_i a_m(f_i) a_n(f_i) x_i,
    // rows scaled by |a_n(P_m)|.
    auto solve_x = [&](std::int64_t m_hi, std::int64_t n_hi) {
        Eigen::MatrixXd lhs(m_hi * n_hi, d);
        Eigen::VectorXd rhs(m_hi * n_hi);
        Eigen::Index row = 0;
        for (std::int64_t m = 1; m <= m_hi; ++m) {
            const double pref = -kfact / ipow(m, k + 1).get_d();
            for (std::int64_t n = 1; n <= n_hi; ++n, ++row) {
                const double v = pos[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(n - 1)].value;
                const double w = 1.0 / std::max(std::abs(v), 1e-300);
                for (std::size_t i = 0; i < ud; ++i) lhs(row, static_cast<Eigen::Index>(i)) = w * pref * a(i, m) * a(i, n);
                rhs(row) = w * v;
            }
        }
        return Eigen::VectorXd(lhs.colPivHouseholderQr().solve(rhs));
    };
    const Eigen::VectorXd x = solve_x(d, n_max);
    const Eigen::VectorXd x_square = solve_x(1, d);
    for (std::size_t i = 0; i < ud; ++i) {
        out.forms[i].c = 1.0 / x(static_cast<Eigen::Index>(i));
        out.c_spread = std::max(out.c_spread, std::abs(relative(1.0 / x_square(static_cast<Eigen::Index>(i)) - out.forms[i].c, out.forms[i].c)));
    }
    for (std::int64_t m = 1; m <= d; ++m) {
        const double pref = -kfact / ipow(m, k + 1).get_d();
        for (std::int64_t n = 1; n <= n_max; ++n) {
            double rebuilt = 0.0;
            for (std::size_t i = 0; i < ud; ++i) rebuilt += pref * a(i, m) * a(i, n) * x(static_cast<Eigen::Index>(i));
            const auto& direct = pos[static_cast<std::size_t>(m - 1)][static_cast<std::size_t>(n - 1)];
            out.roundtrip.push_back({m, n, relative(rebuilt - direct.value, direct.value), relative(direct.tail_estimate, direct.value)});
        }
    }

    // Isotypic duals g_j in the class space.
    const ClassSpace space(weight, d, 2 * d + n_max);
    const Eigen::MatrixXd t2v = to_eigen(space.hecke_matrix(2));
    const auto dim = static_cast<Eigen::Index>(2 * d);
    Eigen::MatrixXd r(d, d);
    for (std::size_t i = 0; i < ud; ++i) {
        for (std::size_t j = 0; j < ud; ++j) r(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, static_cast<std::int64_t>(j + 1));
    }
    const Eigen::MatrixXd rinv = r.inverse();
    for (std::size_t j = 0; j < ud; ++j) {
        Eigen::MatrixXd proj = Eigen::MatrixXd::Identity(dim, dim);
        for (std::size_t i = 0; i < ud; ++i) {
            if (i != j) proj = (t2v - eig[i].first * Eigen::MatrixXd::Identity(dim, dim)) * proj;
        }
        // Column with the largest principal part spans the pole direction.
        Eigen::Index best = 0;
        double best_norm = -1.0;
        for (Eigen::Index col = 0; col < dim; ++col) {
            const double nrm = proj.col(col).head(d).norm() / std::max(proj.col(col).norm(), 1e-300);
            if (nrm > best_norm) {
                best_norm = nrm;
                best = col;
            }
        }
        const Eigen::VectorXd u = proj.col(best);
        // <f_j, u> = k! sum_{n=1}^d a_n(f_j) a_-n(u) / n^(k+1); coordinate of a_-n is d - n.
        double pairing = 0.0;
        for (int n = 1; n <= d; ++n) pairing += kfact * a(j, n) * u(d - n) / ipow(n, k + 1).get_d();
        const double beta = 1.0 / pairing;
        std::vector<double> ucoords(u.data(), u.data() + u.size());
        const auto u_exp = space.expand(ucoords, n_max);
        const double alpha = -beta * u_exp[0];
        std::vector<double> g(static_cast<std::size_t>(n_max));
        for (std::int64_t n = 1; n <= n_max; ++n) {
            g[static_cast<std::size_t>(n - 1)] = alpha * a(j, n) + beta * u_exp[static_cast<std::size_t>(n - 1)];
        }
        // X_j = sum_i m_i^(k+1) r_ij P_-m_i.
        std::vector<double> xj(static_cast<std::size_t>(n_max), 0.0);
        for (std::size_t i = 0; i < ud; ++i) {
            const double w = ipow(static_cast<std::int64_t>(i + 1), k + 1).get_d() * rinv(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            for (std::int64_t n = 1; n <= n_max; ++n) xj[static_cast<std::size_t>(n - 1)] += w * neg[i][static_cast<std::size_t>(n - 1)].value;
        }
        auto& entry = out.forms[j];
        entry.rho = xj[0] / kfact;
        for (std::int64_t n = 2; n <= n_max; ++n) {
            const auto idx = static_cast<std::size_t>(n - 1);
            const double lhs = xj[idx] / kfact;
            entry.rho_residuals.push_back({-1, n, relative(lhs - g[idx] - entry.rho * a(j, n), lhs), 0.0});
        }
    }
    return out;
}

RationalityReport cm_rationality_check(const RankTwoCase& c, std::int64_t n_max, const Control& control, double tol) {
    catalog::require_case(c.level, c.weight);
    if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    RationalityReport out;
    out.tolerance = tol;
    out.max_den = rational::denominator_cap(tol);
    const auto pm = coefficients(-1, c.weight, c.level, range(1, n_max), control);
    bool any = false;
    bool all = true;
    for (std::int64_t n = 1; n <= n_max; ++n) {
        const auto& v = pm[static_cast<std::size_t>(n - 1)];
        RationalityEntry e;
        e.n = n;
        e.value = v.value;
        e.tail = v.tail_estimate;
        e.resolution = std::abs(v.value) * 1e-13;
        e.resolved = e.resolution <= tol / 10.0;
        if (e.resolved) {
            e.nearest = rational::reconstruct(v.value, out.max_den);
            any = true;
            all = all && e.nearest.distance <= tol;
        } else {
            e.nearest.distance = std::numeric_limits<double>::infinity();
        }
        out.entries.push_back(e);
    }
    out.pass = any && all;
    return out;
}

}  // namespace svp::sv
