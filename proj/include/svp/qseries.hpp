#pragma once

// Truncated Laurent series in q with exact rational coefficients.
//
// A QSeries stores the coefficients a_n for valuation <= n <= precision and
// knows nothing about a_n for n > precision. Every operation computes the
// largest precision it can certify from its operands.

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace svp::qexp {

/// Reading past the known window, or an operation that needs a coefficient
/// the truncation has erased.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class QSeries {
public:
    /// The zero series known up to (and including) q^precision.
    static QSeries zero(std::int64_t precision);

    /// c * q^exponent, known up to q^precision.
    static QSeries monomial(const mpq_class& c, std::int64_t exponent, std::int64_t precision);

    /// Coefficients coeffs[i] of q^(first + i); precision defaults to the last
    /// supplied exponent.
    static QSeries from_coefficients(std::int64_t first, std::vector<mpq_class> coeffs);
    static QSeries from_coefficients(std::int64_t first, std::vector<mpq_class> coeffs,
                                     std::int64_t precision);

    QSeries() : QSeries(zero(0)) {}

    /// Lowest exponent with a nonzero coefficient; precision() + 1 when the
    /// series vanishes on its whole window.
    std::int64_t valuation() const noexcept { return valuation_; }
    std::int64_t precision() const noexcept { return precision_; }
    bool is_zero() const noexcept { return coeffs_.empty(); }

    /// a_n; throws TruncationError for n > precision().
    mpq_class coeff(std::int64_t n) const;
    mpq_class operator[](std::int64_t n) const { return coeff(n); }

    /// Coefficient of the lowest term (throws when is_zero()).
    const mpq_class& leading_coefficient() const;

    /// Drop everything above q^precision (which must not exceed the current one).
    QSeries truncate(std::int64_t precision) const;

    QSeries operator-() const;
    QSeries& operator+=(const QSeries& rhs);
    QSeries& operator-=(const QSeries& rhs);
    QSeries& operator*=(const QSeries& rhs);
    QSeries& operator*=(const mpq_class& s);

    friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
    friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
    friend QSeries operator*(const QSeries& a, const QSeries& b);
    friend QSeries operator*(QSeries a, const mpq_class& s) { return a *= s; }
    friend QSeries operator*(const mpq_class& s, QSeries a) { return a *= s; }

    /// 1/f. Throws TruncationError when no nonzero coefficient is known.
    QSeries inverse() const;

    /// f^e for any integer e (negative powers go through the inverse).
    QSeries pow(std::int64_t e) const;

    /// q^shift * f.
    QSeries shift(std::int64_t shift) const;

    /// f(q^d).
    QSeries dilate(std::int64_t d) const;

    /// Apply a_n -> fn(n, a_n) on the known window.
    QSeries map(const std::function<mpq_class(std::int64_t, const mpq_class&)>& fn) const;

    /// Exact equality on the common window min(precision) of both series.
    bool agrees_with(const QSeries& other) const;

    /// Same coefficients and same precision.
    bool operator==(const QSeries& other) const;

    /// Exponent/coefficient pairs of the nonzero terms, in increasing order.
    std::map<std::int64_t, mpq_class> terms() const;

    /// Human-readable form "q^-1 + 744 + 196884*q + O(q^3)".
    std::string to_string(std::size_t max_terms = 12) const;

private:
    QSeries(std::int64_t valuation, std::vector<mpq_class> coeffs, std::int64_t precision);
    void normalize();

    std::int64_t valuation_ = 1;
    std::int64_t precision_ = 0;
    std::vector<mpq_class> coeffs_;  // coeffs_[i] is a_{valuation_ + i}
};

/// Finitely supported principal part sum_{n <= 0} a_n q^n.
struct PrincipalPart {
    std::map<std::int64_t, mpq_class> coeffs;  // only nonzero entries
    bool empty() const noexcept { return coeffs.empty(); }
    bool operator==(const PrincipalPart&) const = default;
};

}  // namespace svp::qexp
