#include "svp/qseries.hpp"

#include <algorithm>
#include <sstream>

namespace svp::qexp {

QSeries::QSeries(std::int64_t valuation, std::vector<mpq_class> coeffs, std::int64_t precision)
    : valuation_(valuation), precision_(precision), coeffs_(std::move(coeffs)) {
    normalize();
}

void QSeries::normalize() {
    const std::int64_t window = precision_ - valuation_ + 1;
    if (window <= 0) {
        coeffs_.clear();
    } else if (static_cast<std::int64_t>(coeffs_.size()) > window) {
        coeffs_.resize(static_cast<std::size_t>(window));
    } else {
        coeffs_.resize(static_cast<std::size_t>(window), mpq_class(0));
    }
    std::size_t lead = 0;
    while (lead < coeffs_.size() && coeffs_[lead] == 0) ++lead;
    if (lead == coeffs_.size()) {
        coeffs_.clear();
        valuation_ = precision_ + 1;
        return;
    }
    if (lead > 0) {
        coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
        valuation_ += static_cast<std::int64_t>(lead);
    }
}

QSeries QSeries::zero(std::int64_t precision) { return QSeries(precision + 1, {}, precision); }

QSeries QSeries::monomial(const mpq_class& c, std::int64_t exponent, std::int64_t precision) {
    return QSeries(exponent, {c}, precision);
}

QSeries QSeries::from_coefficients(std::int64_t first, std::vector<mpq_class> coeffs) {
    const auto precision = first + static_cast<std::int64_t>(coeffs.size()) - 1;
    return QSeries(first, std::move(coeffs), precision);
}

QSeries QSeries::from_coefficients(std::int64_t first, std::vector<mpq_class> coeffs,
                                   std::int64_t precision) {
    return QSeries(first, std::move(coeffs), precision);
}

mpq_class QSeries::coeff(std::int64_t n) const {
    if (n > precision_) {
        throw TruncationError("coefficient q^" + std::to_string(n) +
                              " lies beyond the truncation O(q^" + std::to_string(precision_ + 1) +
                              ")");
    }
    if (n < valuation_) return 0;
    return coeffs_[static_cast<std::size_t>(n - valuation_)];
}

const mpq_class& QSeries::leading_coefficient() const {
    if (coeffs_.empty()) throw TruncationError("series vanishes on its known window");
    return coeffs_.front();
}

QSeries QSeries::truncate(std::int64_t precision) const {
    if (precision > precision_) {
        throw TruncationError("cannot extend precision from " + std::to_string(precision_) +
                              " to " + std::to_string(precision));
    }
    return QSeries(valuation_, coeffs_, precision);
}

QSeries QSeries::operator-() const {
    QSeries out = *this;
    for (auto& c : out.coeffs_) c = -c;
    return out;
}

QSeries& QSeries::operator+=(const QSeries& rhs) {
    const std::int64_t prec = std::min(precision_, rhs.precision_);
    const std::int64_t val = std::min(valuation_, rhs.valuation_);
    if (val > prec) {
        *this = zero(prec);
        return *this;
    }
    std::vector<mpq_class> out(static_cast<std::size_t>(prec - val + 1), mpq_class(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        const std::int64_t n = valuation_ + static_cast<std::int64_t>(i);
        if (n > prec) break;
        out[static_cast<std::size_t>(n - val)] += coeffs_[i];
    }
    for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) {
        const std::int64_t n = rhs.valuation_ + static_cast<std::int64_t>(i);
        if (n > prec) break;
        out[static_cast<std::size_t>(n - val)] += rhs.coeffs_[i];
    }
    *this = QSeries(val, std::move(out), prec);
    return *this;
}

QSeries& QSeries::operator-=(const QSeries& rhs) { return *this += -rhs; }

QSeries& QSeries::operator*=(const QSeries& rhs) { return *this = *this * rhs; }

QSeries& QSeries::operator*=(const mpq_class& s) {
    if (s == 0) {
        *this = zero(precision_);
        return *this;
    }
    for (auto& c : coeffs_) c *= s;
    return *this;
}

QSeries operator*(const QSeries& a, const QSeries& b) {
    // f = q^va (...) + O(q^(Ta+1)), g likewise: fg is certified up to
    // min(Ta + vb, Tb + va).
    const std::int64_t prec = std::min(a.precision_ + b.valuation_, b.precision_ + a.valuation_);
    if (a.is_zero() || b.is_zero()) return QSeries::zero(prec);
    const std::int64_t val = a.valuation_ + b.valuation_;
    if (val > prec) return QSeries::zero(prec);
    const auto len = static_cast<std::size_t>(prec - val + 1);
    std::vector<mpq_class> out(len, mpq_class(0));
    mpq_class tmp;
    for (std::size_t i = 0; i < a.coeffs_.size() && i < len; ++i) {
        if (a.coeffs_[i] == 0) continue;
        const std::size_t jmax = std::min(b.coeffs_.size(), len - i);
        for (std::size_t j = 0; j < jmax; ++j) {
            if (b.coeffs_[j] == 0) continue;
            mpq_mul(tmp.get_mpq_t(), a.coeffs_[i].get_mpq_t(), b.coeffs_[j].get_mpq_t());
            out[i + j] += tmp;
        }
    }
    return QSeries(val, std::move(out), prec);
}

QSeries QSeries::inverse() const { return pow(-1); }

QSeries QSeries::pow(std::int64_t e) const {
    if (coeffs_.empty()) {
        if (e <= 0) throw TruncationError("cannot raise a series with no known nonzero term to power " +
                                          std::to_string(e));
        // O(q^(T+1))^e with T + 1 > 0 is O(q^(e(T+1))).
        const std::int64_t lowest = precision_ + 1;
        return zero(lowest > 0 ? e * lowest - 1 : lowest + (e - 1) * valuation_ - 1);
    }
    // f = a0 q^v (1 + ...), relative precision r = T - v.
    const std::int64_t r = precision_ - valuation_;
    const auto len = static_cast<std::size_t>(r + 1);
    std::vector<mpq_class> b(len);
    // u^e via  n a0 b_n = sum_{k=1}^{n} ((e+1)k - n) a_k b_{n-k}.
    const mpq_class& a0 = coeffs_[0];
    mpq_class a0e = 1;
    {
        mpq_class base = e >= 0 ? a0 : mpq_class(1) / a0;
        std::int64_t m = e >= 0 ? e : -e;
        while (m > 0) {
            if (m & 1) a0e *= base;
            base *= base;
            m >>= 1;
        }
    }
    b[0] = a0e;
    mpq_class acc;
    mpq_class tmp;
    for (std::size_t n = 1; n < len; ++n) {
        acc = 0;
        for (std::size_t k = 1; k <= n && k < coeffs_.size(); ++k) {
            if (coeffs_[k] == 0) continue;
            const std::int64_t weight = (e + 1) * static_cast<std::int64_t>(k) - static_cast<std::int64_t>(n);
            if (weight == 0) continue;
            mpq_mul(tmp.get_mpq_t(), coeffs_[k].get_mpq_t(), b[n - k].get_mpq_t());
            tmp *= mpq_class(weight);
            acc += tmp;
        }
        acc /= a0;
        acc /= mpq_class(static_cast<long>(n));
        b[n] = acc;
    }
    const std::int64_t val = valuation_ * e;
    return QSeries(val, std::move(b), val + r);
}

QSeries QSeries::shift(std::int64_t s) const { return QSeries(valuation_ + s, coeffs_, precision_ + s); }

QSeries QSeries::dilate(std::int64_t d) const {
    if (d < 1) throw std::invalid_argument("dilate needs d >= 1");
    if (coeffs_.empty()) {
        // a_n known zero for n <= T, so a_{n/d} of f(q^d) known up to d(T+1)-1.
        return zero(d * (precision_ + 1) - 1);
    }
    const std::int64_t val = valuation_ * d;
    const std::int64_t prec = d * (precision_ + 1) - 1;
    std::vector<mpq_class> out(static_cast<std::size_t>(prec - val + 1), mpq_class(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i * static_cast<std::size_t>(d)] = coeffs_[i];
    return QSeries(val, std::move(out), prec);
}

QSeries QSeries::map(const std::function<mpq_class(std::int64_t, const mpq_class&)>& fn) const {
    std::vector<mpq_class> out(coeffs_.size());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        out[i] = fn(valuation_ + static_cast<std::int64_t>(i), coeffs_[i]);
    }
    return QSeries(valuation_, std::move(out), precision_);
}

bool QSeries::agrees_with(const QSeries& other) const {
    const std::int64_t prec = std::min(precision_, other.precision_);
    const std::int64_t lo = std::min(valuation_, other.valuation_);
    for (std::int64_t n = lo; n <= prec; ++n) {
        if (coeff(n) != other.coeff(n)) return false;
    }
    return true;
}

bool QSeries::operator==(const QSeries& other) const {
    return precision_ == other.precision_ && valuation_ == other.valuation_ &&
           coeffs_ == other.coeffs_;
}

std::map<std::int64_t, mpq_class> QSeries::terms() const {
    std::map<std::int64_t, mpq_class> out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (coeffs_[i] != 0) out.emplace(valuation_ + static_cast<std::int64_t>(i), coeffs_[i]);
    }
    return out;
}

std::string QSeries::to_string(std::size_t max_terms) const {
    std::ostringstream os;
    std::size_t shown = 0;
    for (std::size_t i = 0; i < coeffs_.size() && shown < max_terms; ++i) {
        const mpq_class& c = coeffs_[i];
        if (c == 0) continue;
        const std::int64_t n = valuation_ + static_cast<std::int64_t>(i);
        const bool negative = c < 0;
        if (shown > 0) os << (negative ? " - " : " + ");
        else if (negative) os << "-";
        const mpq_class mag = negative ? mpq_class(-c) : c;
        const bool unit = (mag == 1);
        if (n == 0 || !unit) os << mag.get_str();
        if (n != 0) {
            if (!unit) os << "*";
            os << "q";
            if (n != 1) os << "^" << n;
        }
        ++shown;
    }
    if (shown > 0) os << " + ";
    os << "O(q^" << (precision_ + 1) << ")";
    return os.str();
}

}  // namespace svp::qexp
