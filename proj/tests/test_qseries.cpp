#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "svp/qseries.hpp"

using svp::qexp::QSeries;
using svp::qexp::TruncationError;

namespace {

QSeries random_series(std::mt19937_64& rng, std::int64_t first, std::int64_t prec) {
    std::uniform_int_distribution<int> num(-9, 9), den(1, 5);
    std::vector<mpq_class> c;
    for (std::int64_t n = first; n <= prec; ++n) c.emplace_back(num(rng), den(rng));
    for (auto& x : c) x.canonicalize();
    if (c.front() == 0) c.front() = 1;
    return QSeries::from_coefficients(first, std::move(c), prec);
}

}  // namespace

TEST_CASE("construction and coefficient access") {
    const auto f = QSeries::from_coefficients(-1, {1, 0, 3, mpq_class(1, 2)});
    CHECK(f.valuation() == -1);
    CHECK(f.precision() == 2);
    CHECK(f.coeff(-5) == 0);
    CHECK(f[1] == 3);
    CHECK(f[2] == mpq_class(1, 2));
    CHECK_THROWS_AS(f.coeff(3), TruncationError);
    CHECK(f.leading_coefficient() == 1);
    CHECK_THROWS_AS(QSeries::zero(4).leading_coefficient(), TruncationError);
    CHECK(QSeries::zero(4).is_zero());
    CHECK_THROWS_AS(f.truncate(5), TruncationError);
    CHECK(f.truncate(0).precision() == 0);
}

TEST_CASE("leading zeros are normalized away") {
    const auto f = QSeries::from_coefficients(0, {0, 0, 2, 5});
    CHECK(f.valuation() == 2);
    CHECK(f.precision() == 3);
    CHECK(f == QSeries::from_coefficients(2, {2, 5}));
}

TEST_CASE("product precision") {
    // (q + O(q^4)) (q^-2 + O(q^2)) is known to q^min(3-2, 1+1) = q^1.
    const auto a = QSeries::from_coefficients(1, {1, 1, 1});
    const auto b = QSeries::from_coefficients(-2, {1, 0, 0, 0});
    const auto p = a * b;
    CHECK(p.precision() == 1);
    CHECK(p.valuation() == -1);
    CHECK(p[0] == 1);
    CHECK(p[1] == 1);
}

TEST_CASE("sum precision is the minimum") {
    const auto a = QSeries::from_coefficients(0, {1, 1, 1, 1, 1});
    const auto b = QSeries::from_coefficients(1, {2, 2});
    const auto s = a + b;
    CHECK(s.precision() == 2);
    CHECK(s[1] == 3);
    CHECK((a - a).is_zero());
}

TEST_CASE("inverse, powers and ring axioms") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 20; ++t) {
        const auto f = random_series(rng, -1, 8);
        const auto g = random_series(rng, 0, 8);
        const auto h = random_series(rng, 2, 12);
        const auto one = f * f.inverse();
        CHECK(one.valuation() == 0);
        CHECK(one.agrees_with(QSeries::monomial(1, 0, one.precision())));
        CHECK(((f * g) * h).agrees_with(f * (g * h)));
        CHECK((f * (g + h)).agrees_with(f * g + f * h));
        CHECK(f.pow(3).agrees_with(f * f * f));
        CHECK(f.pow(-2).agrees_with(f.inverse() * f.inverse()));
        CHECK(f.pow(0).agrees_with(QSeries::monomial(1, 0, 9)));
    }
}

TEST_CASE("pow of a series with no known terms") {
    CHECK_THROWS_AS(QSeries::zero(3).inverse(), TruncationError);
    const auto z = QSeries::zero(3).pow(2);
    CHECK(z.is_zero());
    CHECK(z.precision() == 7);
}

TEST_CASE("shift, dilate, map") {
    const auto f = QSeries::from_coefficients(1, {1, -2, 3});
    const auto s = f.shift(-2);
    CHECK(s.valuation() == -1);
    CHECK(s.precision() == 1);
    CHECK(s[1] == 3);
    const auto d = f.dilate(3);
    CHECK(d.valuation() == 3);
    CHECK(d.precision() == 11);
    CHECK(d[6] == -2);
    CHECK(d[7] == 0);
    CHECK(d[9] == 3);
    CHECK_THROWS_AS(f.dilate(0), std::invalid_argument);
    const auto m = f.map([](std::int64_t n, const mpq_class& a) -> mpq_class { return a * n; });
    CHECK(m[3] == 9);
}

TEST_CASE("to_string") {
    CHECK(QSeries::from_coefficients(-1, {1, -24, 0, mpq_class(1, 2)}).to_string() == "q^-1 - 24 + 1/2*q^2 + O(q^3)");
    CHECK(QSeries::zero(5).to_string() == "O(q^6)");
    CHECK(QSeries::from_coefficients(1, {-1, 2}).to_string(1) == "-q + O(q^3)");
}

TEST_CASE("terms lists nonzero coefficients") {
    const auto t = QSeries::from_coefficients(0, {0, 1, 0, 4}).terms();
    CHECK(t.size() == 2);
    CHECK(t.at(3) == 4);
}
