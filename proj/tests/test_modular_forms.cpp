#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "svp/modular_forms.hpp"

using namespace svp::qexp;

namespace {

// Ramanujan tau from the product expansion computed by repeated multiplication.
std::vector<mpz_class> tau_oracle(std::int64_t T) {
    std::vector<mpz_class> p(static_cast<std::size_t>(T), 0);
    p[0] = 1;
    for (std::int64_t n = 1; n < T; ++n) {
        for (int r = 0; r < 24; ++r) {
            for (std::int64_t i = T - 1; i >= n; --i) p[static_cast<std::size_t>(i)] -= p[static_cast<std::size_t>(i - n)];
        }
    }
    return p;  // p[i] = tau(i + 1)
}

QSeries random_laurent(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
    std::uniform_int_distribution<int> num(-20, 20), den(1, 9);
    std::vector<mpq_class> c;
    for (std::int64_t n = lo; n <= hi; ++n) c.emplace_back(num(rng), den(rng));
    for (auto& x : c) x.canonicalize();
    return QSeries::from_coefficients(lo, std::move(c), hi);
}

}  // namespace

TEST_CASE("Delta coefficients") {
    const auto d = delta(30);
    const auto tau = tau_oracle(30);
    for (std::int64_t n = 1; n <= 30; ++n) CHECK(d[n] == tau[static_cast<std::size_t>(n - 1)]);
    CHECK(d[2] == -24);
    CHECK(d[11] == 534612);
}

TEST_CASE("Delta from Eisenstein series") {
    const auto e4 = eisenstein(4, 25), e6 = eisenstein(6, 25);
    CHECK(e4[1] == 240);
    CHECK(e6[1] == -504);
    CHECK(eisenstein(2, 5)[1] == -24);
    CHECK(((e4.pow(3) - e6.pow(2)) * mpq_class(1, 1728)).agrees_with(delta(25)));
}

TEST_CASE("j-invariant") {
    const auto j = j_invariant(4);
    CHECK(j[-1] == 1);
    CHECK(j[0] == 744);
    CHECK(j[1] == 196884);
    CHECK(j[2] == 21493760);
    CHECK(j[3] == 864299970);
}

TEST_CASE("Euler product matches direct expansion") {
    QSeries prod = QSeries::monomial(1, 0, 40);
    for (std::int64_t n = 1; n <= 40; ++n) {
        prod *= QSeries::monomial(1, 0, 40) - QSeries::monomial(1, n, 40);
    }
    CHECK(euler_product(40) == prod);
}

TEST_CASE("eta quotients") {
    CHECK(eta_quotient({{1, 24}}, 20) == delta(20));
    CHECK_THROWS_AS(eta_quotient({{1, 1}}, 5), std::invalid_argument);
    const auto f11 = eta_quotient({{1, 2}, {11, 2}}, 12);
    CHECK(f11[2] == -2);
    CHECK(f11[3] == -1);
    CHECK(f11[5] == 1);
    CHECK(f11[11] == 1);
}

TEST_CASE("Hecke operators on Delta") {
    const auto d = delta(200);
    for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
        const auto t = hecke_tp(d, p, 10);
        CHECK(t == d.truncate(t.precision()) * d[p]);
    }
    const auto t6 = hecke_tn(d, 6, 10);
    CHECK(t6.agrees_with(hecke_tp(hecke_tp(d, 2, 10), 3, 10)));
    const auto t4 = hecke_tn(d, 4, 10);
    CHECK(t4.agrees_with(hecke_tp(hecke_tp(d, 2, 10), 2, 10) - d * mpq_class(2048)));
    CHECK(t4.agrees_with(d * d[4]));
}

TEST_CASE("level-1 dimensions and cusp basis") {
    const int dims[] = {1, 0, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2, 3};  // weights 0, 2, ..., 24
    for (int i = 0; i <= 12; ++i) {
        CHECK(level1_modular_dim(2 * i) == dims[i]);
        CHECK(level1_cusp_dim(2 * i) == std::max(0, dims[i] - (i == 1 ? 0 : 1)));
    }
    const auto b = level1_cusp_basis(24, 10);
    REQUIRE(b.size() == 2);
    CHECK(b[0][1] == 1);
    CHECK(b[0][2] == 0);
    CHECK(b[1][1] == 0);
    CHECK(b[1][2] == 1);
    for (const auto& f : b) {
        const auto t = hecke_tn(f, 2, 22);
        CHECK(t.precision() >= 4);
    }
    CHECK(is_level1_rank_two_weight(12));
    CHECK(is_level1_rank_two_weight(26));
    CHECK_FALSE(is_level1_rank_two_weight(24));
    CHECK_FALSE(is_level1_rank_two_weight(14));
}

TEST_CASE("Bol operator") {
    const auto h = QSeries::from_coefficients(-2, {3, 1, 7, 2, 5});
    const auto b = bol(h, 3);
    CHECK(b[-2] == 3 * 16);
    CHECK(b[-1] == 1);
    CHECK(b[0] == 0);
    CHECK(b[1] == 2);
    CHECK(b[2] == 5 * 16);
}

TEST_CASE("de Rham pairing") {
    std::mt19937_64 rng(99);
    for (int t = 0; t < 30; ++t) {
        const int k = 2 * static_cast<int>(rng() % 7);
        const auto f = random_laurent(rng, -5, 5), g = random_laurent(rng, -5, 5);
        CHECK(de_rham_pairing(f, g, k) == -de_rham_pairing(g, f, k));
    }
    const auto f = QSeries::from_coefficients(-1, {1, 0, 2});
    const auto g = QSeries::from_coefficients(-1, {3, 0, 5});
    // 0! (a_-1(f) a_1(g) / (-1) + a_1(f) a_-1(g) / 1) = -5 + 6
    CHECK(de_rham_pairing(f, g, 0) == 1);
    const auto short_g = QSeries::from_coefficients(-1, {3, 0});
    CHECK_THROWS_AS(de_rham_pairing(f, short_g, 0), TruncationError);
    // h = E4^2 E6 / Delta^2 has weight -10, so D^11 h is exact.
    const auto h = eisenstein(4, 6).pow(2) * eisenstein(6, 6) * delta(9).pow(-2);
    CHECK(de_rham_pairing(delta(4), bol(h, 10), 10) == 0);
    CHECK(de_rham_pairing(delta(4), bol(h, 8), 10) != 0);
}

TEST_CASE("level-1 dual forms") {
    for (int w : {12, 16, 18, 20, 22, 26}) {
        const auto g = dual_form_level1(w, 5);
        mpq_class fact = 1;
        for (int i = 2; i <= w - 2; ++i) fact *= i;
        CHECK(g[-1] == 1 / fact);
        CHECK(g[0] == 0);
        CHECK(g[1] == 0);
    }
    CHECK(de_rham_pairing(delta(4), dual_form_level1(12, 4), 10) == 1);
    CHECK_THROWS(dual_form_level1(24, 4));
}

TEST_CASE("Hauptmoduln have a single simple pole at infinity") {
    for (std::int64_t N = 2; N <= 9; ++N) {
        const auto recipe = hauptmodul_recipe(N);
        const auto t = eta_quotient(recipe, 6);
        CHECK(t.valuation() == -1);
        CHECK(t[-1] == 1);
        for (std::int64_t c = 1; c <= N; ++c) {
            if (N % c != 0) continue;
            const auto ord = eta_order_at_cusp(recipe, N, c);
            if (c == N) CHECK(ord == -1);
            else CHECK(ord >= 0);
        }
    }
    CHECK_THROWS(hauptmodul_recipe(10));
}

TEST_CASE("level-4 weight-6 form with principal part q^-2") {
    // Independent construction: t = eta(tau)^8 / eta(4 tau)^8, g = eta(2 tau)^12;
    // f = (t^3 + alpha t^2 + beta t + gamma) g with a_-1 = a_0 = a_1 = 0.
    const std::int64_t T = 12;
    const auto t = eta_quotient({{1, 8}, {4, -8}}, T + 4);
    const auto g = eta_quotient({{2, 12}}, T + 4);
    const auto b3 = (t.pow(3) * g).truncate(T), b2 = (t.pow(2) * g).truncate(T);
    const auto b1 = (t * g).truncate(T), b0 = g.truncate(T);
    std::vector<std::vector<mpq_class>> a(3, std::vector<mpq_class>(3));
    std::vector<mpq_class> rhs(3);
    for (int i = 0; i < 3; ++i) {
        const std::int64_t n = i - 1;
        a[static_cast<std::size_t>(i)] = {b2[n], b1[n], b0[n]};
        rhs[static_cast<std::size_t>(i)] = -b3[n];
    }
    const auto x = solve_exact(a, rhs);
    const auto f = b3 + b2 * x[0] + b1 * x[1] + b0 * x[2];
    CHECK(f[-2] == 1);
    CHECK(f[2] == -36);
    CHECK(f[4] == 4096);
    CHECK(f[6] == -97686);
    for (std::int64_t n = -1; n <= T; n += 2) CHECK(f[n] == 0);
}
