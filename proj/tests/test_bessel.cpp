#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "svp/bessel.hpp"

using namespace svp::bessel;

namespace {

// Ascending series in long double.
long double ascending(int nu, long double x, bool modified) {
    long double term = 1.0L;
    for (int i = 1; i <= nu; ++i) term *= (x / 2.0L) / i;
    long double sum = 0.0L;
    for (int j = 0; j < 200; ++j) {
        sum += term;
        term *= (modified ? 1.0L : -1.0L) * (x / 2.0L) * (x / 2.0L) / ((j + 1.0L) * (nu + j + 1.0L));
        if (std::fabs(term) < 1e-30L * std::fabs(sum)) break;
    }
    return sum;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

TEST_CASE("leading-term and tabulated values") {
    CHECK(bessel_j(1, 1e-8) == doctest::Approx(5e-9).epsilon(1e-2));
    CHECK(bessel_i(1, 1e-8) == doctest::Approx(5e-9).epsilon(1e-2));
    CHECK(std::abs(bessel_j(1, 1.0) - 0.4400505857449335) < 1e-12);
    CHECK(std::abs(bessel_i(1, 1.0) - 0.5651591039924851) < 1e-12);
    CHECK(bessel_j(3, 0.0) == 0.0);
    CHECK(bessel_i(3, 0.0) == 0.0);
}

TEST_CASE("agreement with the ascending-series oracle") {
    for (int nu = 1; nu <= 26; ++nu) {
        for (double x : {1e-6, 0.01, 0.3, 1.0, 2.5, 7.0, 11.9}) {
            CHECK(rel(bessel_j(nu, x), static_cast<double>(ascending(nu, x, false))) < 1e-10);
            CHECK(rel(bessel_i(nu, x), static_cast<double>(ascending(nu, x, true))) < 1e-10);
        }
    }
    const double x = 4.0 * 3.14159265358979323846;
    CHECK(bessel_i(11, x) > 0.0);
    CHECK(rel(bessel_i(11, x), static_cast<double>(ascending(11, x, true))) < 1e-10);
}

TEST_CASE("agreement with the standard library") {
    for (int nu = 1; nu <= 25; nu += 2) {
        for (double x : {0.5, 5.0, 13.0, 30.0, 100.0, 900.0}) {
            const double want = std::cyl_bessel_j(static_cast<double>(nu), x);
            CHECK(std::abs(bessel_j(nu, x) - want) < 1e-10 * std::max(1.0, std::abs(want)) + 1e-13);
        }
        for (double x : {0.5, 5.0, 13.0, 60.0, 300.0}) {
            CHECK(rel(bessel_i(nu, x), std::cyl_bessel_i(static_cast<double>(nu), x)) < 1e-9);
        }
    }
}

TEST_CASE("three-term recurrences") {
    CHECK(std::abs(bessel_j(2, 2.0) + bessel_j(4, 2.0) - 3.0 * bessel_j(3, 2.0)) < 1e-10);
    for (int nu = 2; nu <= 12; ++nu) {
        for (double x : {0.5, 1.0, 2.0, 5.0, 20.0}) {
            const double jl = bessel_j(nu - 1, x), jr = bessel_j(nu + 1, x), jm = bessel_j(nu, x);
            const double scale = std::max({std::abs(jl), std::abs(jr), std::abs(2.0 * nu / x * jm)});
            CHECK(std::abs(jl + jr - 2.0 * nu / x * jm) <= 1e-9 * scale);
            const double il = bessel_i(nu - 1, x), ir = bessel_i(nu + 1, x), im = bessel_i(nu, x);
            CHECK(std::abs(il - ir - 2.0 * nu / x * im) <= 1e-9 * il);
            CHECK(im > 0.0);
        }
    }
}

TEST_CASE("small-argument bound") {
    for (int nu = 1; nu <= 10; ++nu) {
        for (double x : {0.01, 0.2, 0.7, 1.0}) {
            CHECK(std::abs(bessel_j(nu, x)) <= std::pow(x / 2.0, nu) / std::tgamma(nu + 1.0) * (1 + 1e-14));
        }
    }
}

TEST_CASE("domain errors") {
    CHECK_THROWS_AS(bessel_j(0, 1.0), OutOfRange);
    CHECK_THROWS_AS(bessel_j(1, -1.0), OutOfRange);
    CHECK_THROWS_AS(bessel_j(1, 1.5e4), OutOfRange);
    CHECK_THROWS_AS(bessel_i(1, 701.0), OutOfRange);
    CHECK_THROWS_AS(bessel_i(1, -0.1), OutOfRange);
    CHECK_NOTHROW(bessel_i(1, 700.0));
}
