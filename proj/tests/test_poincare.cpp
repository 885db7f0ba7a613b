#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "svp/modular_forms.hpp"
#include "svp/poincare.hpp"

using namespace svp::poincare;

namespace {

constexpr double kPi = std::numbers::pi;

Control by_c(std::int64_t c_max, unsigned threads = 1) {
    Control c;
    c.c_max = c_max;
    c.threads = threads;
    return c;
}

// Naive evaluation with the standard-library Bessel functions and a complex
// exponential Kloosterman sum.
double oracle(std::int64_t m, int k, std::int64_t N, std::int64_t n, std::int64_t c_max) {
    long double sum = 0.0L;
    for (std::int64_t c = N; c <= c_max; c += N) {
        std::complex<double> kl = 0.0;
        for (std::int64_t x = 1; x < c || (c == 1 && x == 1); ++x) {
            if (std::gcd(x, c) != 1) continue;
            std::int64_t inv = 0;
            while (c > 1 && (x * inv) % c != 1) ++inv;
            kl += std::polar(1.0, 2 * kPi * static_cast<double>((m * x + n * inv) % c) / static_cast<double>(c));
            if (c == 1) break;
        }
        const double arg = 4 * kPi * std::sqrt(static_cast<double>(std::llabs(m) * n)) / static_cast<double>(c);
        const double b = m > 0 ? std::cyl_bessel_j(k - 1.0, arg) : std::cyl_bessel_i(k - 1.0, arg);
        sum += kl.real() / static_cast<double>(c) * b;
    }
    const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    const double pref = 2 * kPi * sign * std::pow(static_cast<double>(n) / static_cast<double>(std::llabs(m)), 0.5 * (k - 1));
    return pref * static_cast<double>(sum) + (m == n ? 1.0 : 0.0);
}

}  // namespace

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(poincare_coeff({0, 12, 1, 1}, by_c(10)), InvalidParams);
    CHECK_THROWS_AS(poincare_coeff({1, 3, 1, 1}, by_c(10)), InvalidParams);
    CHECK_THROWS_AS(poincare_coeff({1, 0, 1, 1}, by_c(10)), InvalidParams);
    CHECK_THROWS_AS(poincare_coeff({1, 12, 0, 1}, by_c(10)), InvalidParams);
    CHECK_THROWS_AS(poincare_coeff({1, 12, 1, 0}, by_c(10)), InvalidParams);
    CHECK_THROWS_AS(poincare_coeff({1, 12, 1, 1}, Control{}), InvalidParams);
    Control both;
    both.c_max = 10;
    both.tol = 1e-3;
    CHECK_THROWS_AS(poincare_coeff({1, 12, 1, 1}, both), InvalidParams);
    Control no_cap;
    no_cap.tol = 1e-3;
    no_cap.hard_cap = 0;
    CHECK_THROWS_AS(poincare_coeff({1, 12, 1, 1}, no_cap), InvalidParams);
    CHECK_THROWS_AS(poincare_qexp(1, 12, 1, 0, by_c(10)), InvalidParams);
}

TEST_CASE("agreement with a naive evaluation") {
    struct Case {
        std::int64_t m;
        int k;
        std::int64_t N, n;
    };
    for (const Case& t : {Case{1, 12, 1, 1}, Case{1, 12, 1, 3}, Case{-1, 12, 1, 2}, Case{-2, 6, 4, 2},
                          Case{1, 4, 9, 2}, Case{-1, 2, 11, 1}, Case{2, 8, 2, 5}}) {
        const double got = poincare_coeff({t.m, t.k, t.N, t.n}, by_c(120)).value;
        const double want = oracle(t.m, t.k, t.N, t.n, 120);
        CHECK(std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("holomorphic Poincare series at weight 12 is proportional to Delta") {
    Control c;
    c.tol = 1e-12;
    const auto p = poincare_qexp(1, 12, 1, 6, c);
    const auto d = svp::qexp::delta(6);
    for (std::int64_t n = 1; n <= 6; ++n) {
        const auto& v = p[static_cast<std::size_t>(n - 1)];
        CHECK(v.converged);
        CHECK(v.tail_estimate < 1e-12);
        CHECK(std::abs(v.value - p[0].value * d[n].get_d()) < 1e-9 * std::abs(d[n].get_d()));
    }
}

TEST_CASE("weight-2 level-1 series approaches -Dj") {
    const auto p = poincare_qexp(-1, 2, 1, 2, by_c(10000));
    CHECK(std::abs(p[0].value / -196884.0 - 1.0) < 5e-3);
    CHECK(std::abs(p[1].value / -42987520.0 - 1.0) < 5e-3);
    CHECK(p[0].c_max == 10000);
    CHECK(p[0].terms_summed == 10000);
}

TEST_CASE("thread count does not change the result") {
    const auto a = poincare_qexp(-1, 4, 9, 6, by_c(5000, 1));
    const auto b = poincare_qexp(-1, 4, 9, 6, by_c(5000, 3));
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].value == b[i].value);
}

TEST_CASE("tolerance mode and the hard cap") {
    Control c;
    c.tol = 1e-6;
    const auto ok = poincare_coeff({-1, 4, 9, 2}, c);
    CHECK(ok.converged);
    CHECK(ok.tail_estimate < 1e-6);
    CHECK(std::abs(ok.value - 2.0) < 1e-5);
    c.tol = 1e-30;
    c.hard_cap = 500;
    const auto capped = poincare_coeff({-1, 4, 9, 2}, c);
    CHECK_FALSE(capped.converged);
    CHECK(capped.c_max <= 500);
}

TEST_CASE("tail bound") {
    CHECK_THROWS_AS(tail_bound(-1, 1, 12, 1, 5), std::domain_error);
    CHECK_THROWS_AS(tail_bound(-1, 1, 12, 1, 0), std::domain_error);
    double prev = tail_bound(-1, 1, 12, 1, 13);
    for (std::int64_t c : {20, 50, 100, 1000, 10000}) {
        const double t = tail_bound(-1, 1, 12, 1, c);
        CHECK(t < prev);
        CHECK(t > 0.0);
        prev = t;
    }
    for (auto [m, k, N, n] : {std::tuple{-1, 12, 1, 1}, std::tuple{1, 4, 9, 5}, std::tuple{-2, 6, 4, 3}}) {
        const double near = poincare_coeff({m, k, N, n}, by_c(200 * N)).value;
        const double far = poincare_coeff({m, k, N, n}, by_c(20000 * N)).value;
        CHECK(std::abs(near - far) <= tail_bound(m, n, k, N, 201 * N));
    }
}

TEST_CASE("tail bound decay at weight 6") {
    for (std::int64_t c : {40, 100, 1000, 10000}) {
        CHECK(tail_bound(-2, 3, 6, 4, c) >= 16.0 * tail_bound(-2, 3, 6, 4, 2 * c));
    }
}

TEST_CASE("doubling the cutoff moves the value by less than the tail bound") {
    for (auto [m, k, N, n] : {std::tuple{-1, 4, 9, 2}, std::tuple{1, 12, 1, 2}, std::tuple{-1, 2, 11, 1}}) {
        const std::int64_t c = 400 * N;
        const double v1 = poincare_coeff({m, k, N, n}, by_c(c)).value;
        const double v2 = poincare_coeff({m, k, N, n}, by_c(2 * c)).value;
        CHECK(std::abs(v1 - v2) <= tail_bound(m, n, k, N, c));
    }
}
