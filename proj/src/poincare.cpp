#include "svp/poincare.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>

#include "svp/arith.hpp"
#include "svp/bessel.hpp"

namespace svp::poincare {

namespace {

constexpr double kPi = std::numbers::pi;

// Multiples of N per reduction block. Block sums are formed independently
// and folded in block order, so the result does not depend on the thread
// count.
constexpr std::int64_t kBlock = 512;

void validate(std::int64_t m, int k, std::int64_t N, const std::vector<std::int64_t>& ns) {
    if (m == 0) throw InvalidParams("m = 0 (Eisenstein case) is not supported");
    if (k < 2 || k % 2 != 0) throw InvalidParams("weight must be even and >= 2, got " + std::to_string(k));
    if (N < 1) throw InvalidParams("level must be >= 1");
    for (auto n : ns) {
        if (n < 1) throw InvalidParams("coefficient index must be >= 1, got " + std::to_string(n));
    }
}

void validate_control(const Control& c) {
    const bool by_c = c.c_max > 0;
    const bool by_tol = c.tol > 0.0;
    if (by_c == by_tol) throw InvalidParams("exactly one of c_max and tol must be set");
    if (by_tol && c.hard_cap < 1) throw InvalidParams("hard_cap must be positive");
}

double log_factorial(int n) { return std::lgamma(static_cast<double>(n) + 1.0); }

class SeriesSum {
public:
    SeriesSum(std::int64_t m, int k, std::int64_t N, std::vector<std::int64_t> ns, unsigned threads)
        : m_(m), k_(k), N_(N), ns_(std::move(ns)), totals_(ns_.size()) {
        threads_ = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
        for (auto n : ns_) args_.push_back(4.0 * kPi * std::sqrt(static_cast<double>(std::llabs(m_) * n)));
    }

    // Extend the sum to all multiples N*j with j <= j_end (j_end a multiple
    // of kBlock, or the final partial block).
    void extend_to(std::int64_t j_end) {
        if (j_end <= j_done_) return;
        const std::int64_t first_block = j_done_ / kBlock;
        const std::int64_t last_block = (j_end + kBlock - 1) / kBlock;
        const auto count = static_cast<std::size_t>(last_block - first_block);
        std::vector<std::vector<double>> partial(count);
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (std::size_t b = next++; b < count; b = next++) {
                const std::int64_t lo = std::max((first_block + static_cast<std::int64_t>(b)) * kBlock + 1, j_done_ + 1);
                const std::int64_t block_end = (first_block + static_cast<std::int64_t>(b) + 1) * kBlock;
                const std::int64_t hi = std::min(block_end, j_end);
                partial[b] = block_sum(lo, hi);
            }
        };
        const unsigned used = static_cast<unsigned>(std::min<std::size_t>(threads_, count));
        if (used <= 1) {
            worker();
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < used; ++t) pool.emplace_back(worker);
            for (auto& th : pool) th.join();
        }
        for (const auto& block : partial) {
            for (std::size_t i = 0; i < block.size(); ++i) totals_[i].add(block[i]);
        }
        j_done_ = j_end;
    }

    std::int64_t j_done() const { return j_done_; }
    double total(std::size_t i) const { return totals_[i].value(); }

private:
    std::vector<double> block_sum(std::int64_t lo, std::int64_t hi) const {
        std::vector<arith::CompensatedSum> sums(ns_.size());
        for (std::int64_t j = lo; j <= hi; ++j) {
            const std::int64_t c = N_ * j;
            const auto ks = arith::kloosterman_batch(m_, ns_, c);
            const double cd = static_cast<double>(c);
            for (std::size_t i = 0; i < ns_.size(); ++i) {
                if (ks[i] == 0.0) continue;
                const double x = args_[i] / cd;
                const double b = m_ > 0 ? bessel::bessel_j(k_ - 1, x) : bessel::bessel_i(k_ - 1, x);
                sums[i].add(ks[i] / cd * b);
            }
        }
        std::vector<double> out(ns_.size());
        for (std::size_t i = 0; i < ns_.size(); ++i) out[i] = sums[i].value();
        return out;
    }

    std::int64_t m_;
    int k_;
    std::int64_t N_;
    std::vector<std::int64_t> ns_;
    std::vector<double> args_;
    std::vector<arith::CompensatedSum> totals_;
    unsigned threads_ = 1;
    std::int64_t j_done_ = 0;
};

// Tail bound where defined, +inf otherwise.
double safe_tail(std::int64_t m, std::int64_t n, int k, std::int64_t N, std::int64_t c_from) {
    const double x = 4.0 * kPi * std::sqrt(static_cast<double>(std::llabs(m) * n)) / static_cast<double>(c_from);
    if (x > 1.0) return std::numeric_limits<double>::infinity();
    return tail_bound(m, n, k, N, c_from);
}

}  // namespace

double tail_bound(std::int64_t m, std::int64_t n, int k, std::int64_t N, std::int64_t c_from) {
    validate(m, k, N, {n});
    if (c_from < 1) throw std::domain_error("tail_bound needs c_from >= 1");
    const double mn = static_cast<double>(std::llabs(m) * n);
    const double half_x = 2.0 * kPi * std::sqrt(mn) / static_cast<double>(c_from);
    if (2.0 * half_x > 1.0) {
        throw std::domain_error("tail_bound: c_from = " + std::to_string(c_from) +
                                " is below the small-argument regime 4 pi sqrt(|m| n)");
    }
    // Term at c = N j is at most
    //   pref * d(N) d(j) sqrt(g) c^{-1/2} (2 pi sqrt(|m| n) / c)^{k-1} / (k-1)! * exp(half_x^2),
    // i.e. const * d(j) j^{-s} with s = k - 1/2.
    const double s = static_cast<double>(k) - 0.5;
    const double g = static_cast<double>(arith::gcd(std::llabs(m), n));
    const double log_a = std::log(2.0 * kPi) +
                         0.5 * (k - 1) * std::log(static_cast<double>(n) / static_cast<double>(std::llabs(m))) +
                         0.5 * std::log(g) + std::log(static_cast<double>(arith::divisor_count(N))) +
                         (k - 1) * std::log(2.0 * kPi * std::sqrt(mn)) - log_factorial(k - 1) +
                         half_x * half_x - s * std::log(static_cast<double>(N));
    // sum_{j >= J} d(j) j^{-s} <= s [ h(J) + int_J^inf h ], h(x) = (log x + 1) x^{-s},
    // by partial summation with sum_{j <= x} d(j) <= x (log x + 1).
    const auto J = static_cast<double>((c_from + N - 1) / N);
    const double lj = std::log(J);
    const double tail = s * ((lj + 1.0) * std::pow(J, -s) +
                             std::pow(J, 1.0 - s) / (s - 1.0) * (lj + 1.0 + 1.0 / (s - 1.0)));
    return std::exp(log_a) * tail;
}

std::vector<Coefficient> poincare_coeffs(std::int64_t m, int k, std::int64_t N,
                                         const std::vector<std::int64_t>& ns, const Control& control) {
    validate(m, k, N, ns);
    validate_control(control);
    SeriesSum series(m, k, N, ns, control.threads);
    bool converged = true;
    if (control.c_max > 0) {
        series.extend_to(control.c_max / N);
    } else {
        const std::int64_t j_cap = std::max<std::int64_t>(1, control.hard_cap / N);
        std::int64_t j_end = std::min(kBlock, j_cap);
        for (;;) {
            series.extend_to(j_end);
            double worst = 0.0;
            for (auto n : ns) worst = std::max(worst, safe_tail(m, n, k, N, (j_end + 1) * N));
            if (worst < control.tol) break;
            if (j_end >= j_cap) {
                converged = false;
                break;
            }
            j_end = std::min(2 * j_end, j_cap);
        }
    }
    const std::int64_t j = series.j_done();
    std::vector<Coefficient> out;
    out.reserve(ns.size());
    const double sign = (k / 2) % 2 == 0 ? 1.0 : -1.0;
    const double am = static_cast<double>(std::llabs(m));
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto n = ns[i];
        const double pref = 2.0 * kPi * sign * std::pow(static_cast<double>(n) / am, 0.5 * (k - 1));
        Coefficient c;
        c.value = pref * series.total(i) + ((m > 0 && n == m) ? 1.0 : 0.0);
        c.c_max = j * N;
        c.terms_summed = j;
        c.tail_estimate = safe_tail(m, n, k, N, (j + 1) * N);
        c.converged = converged;
        out.push_back(c);
    }
    return out;
}

Coefficient poincare_coeff(const Params& p, const Control& control) {
    return poincare_coeffs(p.m, p.k, p.N, {p.n}, control).front();
}

std::vector<Coefficient> poincare_qexp(std::int64_t m, int k, std::int64_t N, std::int64_t n_max,
                                       const Control& control) {
    if (n_max < 1) throw InvalidParams("n_max must be >= 1");
    std::vector<std::int64_t> ns(static_cast<std::size_t>(n_max));
    for (std::int64_t n = 1; n <= n_max; ++n) ns[static_cast<std::size_t>(n - 1)] = n;
    return poincare_coeffs(m, k, N, ns, control);
}

}  // namespace svp::poincare
