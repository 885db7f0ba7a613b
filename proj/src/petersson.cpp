#include "svp/petersson.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace svp::petersson {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr unsigned kMaxDepth = 20;

}  // namespace

double petersson_norm_numeric(const qexp::QSeries& f, int weight, long level, double rel_tol, double y_max) {
    if (level != 1) throw std::invalid_argument("petersson_norm_numeric supports level 1 only");
    if (weight < 2 || weight % 2 != 0) throw std::invalid_argument("weight must be even and >= 2");
    if (f.is_zero()) return 0.0;
    if (f.valuation() < 1) throw std::invalid_argument("petersson_norm_numeric needs a cusp expansion");

    std::vector<double> a;  // a[n - 1] = a_n
    for (std::int64_t n = 1; n <= f.precision(); ++n) a.push_back(f.coeff(n).get_d());

    // Lowest point of the domain has |q| = exp(-pi sqrt 3); the first omitted
    // term must be negligible there.
    const double q_max = std::exp(-kPi * std::sqrt(3.0));
    double largest = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) largest = std::max(largest, std::abs(a[i]) * std::pow(q_max, static_cast<double>(i + 1)));
    const double omitted = std::pow(static_cast<double>(a.size() + 1), weight / 2.0) *
                           std::pow(q_max, static_cast<double>(a.size() + 1));
    if (omitted > 1e-10 * largest) {
        throw QuadratureError("expansion known only to q^" + std::to_string(f.precision()) +
                              " does not resolve f on the fundamental domain");
    }

    auto value = [&](double x, double y) {
        const std::complex<double> q = std::polar(std::exp(-2.0 * kPi * y), 2.0 * kPi * x);
        std::complex<double> sum = 0.0;
        for (auto it = a.rbegin(); it != a.rend(); ++it) sum = (sum + *it) * q;  // Horner
        return std::norm(sum) * std::pow(y, weight - 2);
    };

    using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
    double worst_inner = 0.0;
    auto inner = [&](double x) {
        double err = 0.0;
        const double y0 = std::sqrt(1.0 - x * x);
        const double v = Rule::integrate([&](double y) { return value(x, y); }, y0, y_max, kMaxDepth, rel_tol * 0.1, &err);
        if (v != 0.0) worst_inner = std::max(worst_inner, err / std::abs(v));
        return v;
    };
    double err = 0.0;
    const double half = Rule::integrate(inner, 0.0, 0.5, kMaxDepth, rel_tol, &err);
    // Rational coefficients make |f| even in x.
    if (err > rel_tol * std::abs(half) || worst_inner > rel_tol) {
        throw QuadratureError("Petersson quadrature did not converge (relative error " +
                              std::to_string(std::max(err / std::abs(half), worst_inner)) + ")");
    }
    return 2.0 * half;
}

}  // namespace svp::petersson
