#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "svp/forms_catalog.hpp"
#include "svp/periods.hpp"

using namespace svp::periods;
using svp::catalog::CurveModel;

namespace {

constexpr double kPi = std::numbers::pi;

double j_of(cplx tau) {
    const cplx e4 = eisenstein_value(4, tau), e6 = eisenstein_value(6, tau);
    return std::abs(1728.0 * e4 * e4 * e4 / (e4 * e4 * e4 - e6 * e6));
}

double max_diff(const RMatrix& a, const RMatrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t j = 0; j < a[i].size(); ++j) m = std::max(m, std::abs(a[i][j] - b[i][j]));
    }
    return m;
}

}  // namespace

TEST_CASE("Eisenstein values at elliptic points") {
    CHECK(std::abs(eisenstein_value(6, cplx(0, 1))) < 1e-12);
    const cplx rho(-0.5, std::sqrt(3.0) / 2.0);
    CHECK(std::abs(eisenstein_value(4, rho)) < 1e-12);
    // E4(i) = 3 Gamma(1/4)^8 / (2 pi)^6.
    CHECK(std::abs(eisenstein_value(4, cplx(0, 1)) - 3.0 * std::pow(std::tgamma(0.25), 8) / std::pow(2 * kPi, 6)) < 1e-10);
    CHECK_THROWS_AS(eisenstein_value(4, cplx(0, -1)), std::domain_error);
    CHECK_THROWS_AS(eisenstein_value(8, cplx(0, 1)), std::invalid_argument);
}

TEST_CASE("CM curves land on the expected j-invariants") {
    const auto sq = period_lattice(CurveModel{0, 0, 0, -1, 0});
    CHECK(std::abs(sq.tau() - cplx(0, 1)) < 1e-12);
    CHECK(j_of(sq.tau()) == doctest::Approx(1728.0).epsilon(1e-9));
    const auto hex = period_lattice(CurveModel{0, 0, 0, 0, 1});
    CHECK(std::abs(j_of(hex.tau())) < 1e-6);
}

TEST_CASE("j(tau) matches c4^3 / Delta for every curve") {
    for (const auto& c : svp::catalog::rank_two_table()) {
        if (c.weight != 2) continue;
        const auto e = svp::catalog::curve_model(c.level);
        const double c4 = static_cast<double>(e.c4());
        const double j = c4 * c4 * c4 / static_cast<double>(e.discriminant());
        const auto lat = period_lattice(e);
        CHECK(lat.tau().imag() > 0.0);
        CHECK(std::abs(lat.omega1.imag()) < 1e-14);
        const cplx e4 = eisenstein_value(4, lat.tau()), e6 = eisenstein_value(6, lat.tau());
        const cplx jt = 1728.0 * e4 * e4 * e4 / (e4 * e4 * e4 - e6 * e6);
        CHECK(std::abs(jt - j) < 1e-8 * std::max(1.0, std::abs(j)));
    }
}

TEST_CASE("Legendre relation and det P") {
    for (const auto& c : svp::catalog::rank_two_table()) {
        if (c.weight != 2) continue;
        const auto lat = period_lattice(svp::catalog::curve_model(c.level));
        const cplx det = lat.omega1 * lat.eta2 - lat.omega2 * lat.eta1;
        CHECK(std::abs(det - cplx(0, 2 * kPi)) < 1e-10);
    }
    const cplx w1(1.3, 0.0), w2(0.2, 1.7);
    const auto [e1, e2] = weierstrass_quasi_periods(w1, w2);
    CHECK(std::abs(e1 * w2 - e2 * w1 - cplx(0, 2 * kPi)) < 1e-10);
    CHECK_THROWS_AS(weierstrass_quasi_periods(w2, w1), std::domain_error);
}

TEST_CASE("level-11 period matrix") {
    const auto p = period_lattice(svp::catalog::curve_model(11)).matrix();
    CHECK(std::abs(p[0][0] - cplx(1.269209, 0)) < 1e-6);
    CHECK(std::abs(p[1][0] - cplx(0.634604, 1.458816)) < 1e-6);
    const auto s = sv_matrix(p, 1);
    CHECK(std::abs(s.s[1][0] + 0.589364) < 1e-6);
    CHECK(std::abs(s.s[0][0] + 0.028238) < 1e-6);
}

TEST_CASE("S is invariant under a change of homology basis") {
    const auto p = period_lattice(svp::catalog::curve_model(11)).matrix();
    const auto s = sv_matrix(p, 1);
    const double gammas[][4] = {{1, 1, 0, 1}, {0, -1, 1, 0}, {2, 1, 1, 1}, {3, -2, 5, -3}};
    for (const auto& g : gammas) {
        CMatrix q = {{g[0] * p[0][0] + g[1] * p[1][0], g[0] * p[0][1] + g[1] * p[1][1]},
                     {g[2] * p[0][0] + g[3] * p[1][0], g[2] * p[0][1] + g[3] * p[1][1]}};
        CHECK(max_diff(sv_matrix(q, 1).s, s.s) < 1e-10);
    }
}

TEST_CASE("block relations") {
    for (const auto& c : svp::catalog::rank_two_table()) {
        if (c.weight != 2) continue;
        const auto s = sv_matrix(period_lattice(svp::catalog::curve_model(c.level)).matrix(), 1);
        const auto r = check_block_relations(s);
        CHECK(r.passes(1e-9));
        CHECK(r.involution < 1e-9);
        CHECK(r.trace < 1e-9);
    }
    for (int n : {1, 3, 11, 25}) {
        const auto s = sv_from_c_rho(-1.7e5, 3.2e-4, n);
        CHECK(s.weight == n);
        CHECK(s.d == 1);
        CHECK(check_block_relations(s).passes(1e-9));
    }
    CHECK_THROWS_AS(sv_from_c_rho(0.0, 1.0, 1), InconsistentMatrix);
}

TEST_CASE("degenerate input") {
    CHECK_THROWS_AS(period_lattice(CurveModel{0, 0, 0, 0, 0}), SingularCurve);
    CHECK_THROWS_AS(sv_matrix({{1.0, 2.0}, {2.0, 4.0}}, 1), InconsistentMatrix);
    CHECK_THROWS_AS(sv_matrix({{1.0, 2.0, 3.0}}, 1), InconsistentMatrix);
    CHECK_THROWS_AS(sv_matrix({{cplx(1, 0), cplx(0, 1)}, {cplx(1, 1), cplx(2, 0)}}, 1), InconsistentMatrix);
}
