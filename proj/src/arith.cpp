#include "svp/arith.hpp"

#include <algorithm>
#include <numbers>
#include <string>

namespace svp::arith {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_modulus(std::int64_t c) {
    if (c < 1 || c > kMaxModulus) {
        throw std::overflow_error("modulus " + std::to_string(c) + " outside [1, 2^31]");
    }
}

// Extended Euclid; returns g = gcd(x, c) and the Bezout coefficient of x.
std::pair<std::int64_t, std::int64_t> bezout(std::int64_t x, std::int64_t c) {
    std::int64_t r0 = c, r1 = x, s0 = 0, s1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::int64_t t = r0 - q * r1;
        r0 = r1;
        r1 = t;
        t = s0 - q * s1;
        s0 = s1;
        s1 = t;
    }
    return {r0, s0};
}

// Direct sum for a prime-power modulus q = p^e with e >= 2 (also used for
// tiny moduli). a and b are already reduced mod q.
double kloosterman_prime_power(std::int64_t a, std::int64_t b, std::int64_t q, std::int64_t p) {
    CompensatedSum sum;
    for (std::int64_t x = 1; x < q; ++x) {
        if (x % p == 0) continue;
        const std::int64_t xi = mod(bezout(x, q).second, q);
        const std::int64_t j = (a * x + b * xi) % q;
        sum.add(std::cos(kTwoPi * static_cast<double>(j) / static_cast<double>(q)));
    }
    return sum.value();
}

// a*b mod p for a, b < p < 2^32, with the quotient estimated in double
// precision; the estimate is off by at most one.
struct MulMod {
    std::uint64_t p;
    double pinv;
    explicit MulMod(std::uint64_t modulus) : p(modulus), pinv(1.0 / static_cast<double>(modulus)) {}
    std::uint64_t operator()(std::uint64_t a, std::uint64_t b) const noexcept {
        const auto q = static_cast<std::uint64_t>(static_cast<double>(a) * static_cast<double>(b) * pinv);
        auto r = static_cast<std::int64_t>(a * b - q * p);
        if (r < 0) {
            r += static_cast<std::int64_t>(p);
        } else if (r >= static_cast<std::int64_t>(p)) {
            r -= static_cast<std::int64_t>(p);
        }
        return static_cast<std::uint64_t>(r);
    }
};

// Above this prime the cosine table is skipped and cos() is called directly.
constexpr std::uint64_t kCosTableLimit = std::uint64_t{1} << 24;

// K(1, t_i; p) for an odd prime p and t_i in [1, p). The summands at x and
// -x coincide, so only x <= (p-1)/2 is visited. Inverses of 1..(p-1)/2 come
// from prefix products and one extended-Euclid inversion; cosines come from
// a table assembled as cos(a + b) over a sqrt(p) x sqrt(p) grid.
void kloosterman_unit_prime(std::uint64_t p, const std::vector<std::uint64_t>& ts,
                            std::vector<double>& out) {
    thread_local std::vector<std::uint32_t> inv;
    thread_local std::vector<std::uint32_t> prefix;
    thread_local std::vector<double> costab;
    const std::uint64_t half = (p - 1) / 2;
    if (inv.size() < half + 1) {
        inv.resize(half + 1);
        prefix.resize(half + 1);
    }
    const MulMod mm(p);
    prefix[0] = 1;
    for (std::uint64_t x = 1; x <= half; ++x) prefix[x] = static_cast<std::uint32_t>(mm(prefix[x - 1], x));
    auto acc = static_cast<std::uint64_t>(
        mod(bezout(static_cast<std::int64_t>(prefix[half]), static_cast<std::int64_t>(p)).second,
            static_cast<std::int64_t>(p)));
    for (std::uint64_t x = half; x >= 1; --x) {
        inv[x] = static_cast<std::uint32_t>(mm(acc, prefix[x - 1]));
        acc = mm(acc, x);
    }

    const double scale = kTwoPi / static_cast<double>(p);
    const bool tabulate = p <= kCosTableLimit;
    if (tabulate) {
        if (costab.size() < p) costab.resize(p);
        const auto block = static_cast<std::uint64_t>(std::ceil(std::sqrt(static_cast<double>(p))));
        std::vector<double> sc(block), ss(block);
        for (std::uint64_t j = 0; j < block; ++j) {
            sc[j] = std::cos(scale * static_cast<double>(j));
            ss[j] = std::sin(scale * static_cast<double>(j));
        }
        for (std::uint64_t i = 0; i * block < p; ++i) {
            const double angle = scale * static_cast<double>(i * block);
            const double bc = std::cos(angle);
            const double bs = std::sin(angle);
            const std::uint64_t jmax = std::min(block, p - i * block);
            double* row = costab.data() + i * block;
            for (std::uint64_t j = 0; j < jmax; ++j) row[j] = bc * sc[j] - bs * ss[j];
        }
    }

    out.assign(ts.size(), 0.0);
    std::vector<CompensatedSum> sums(ts.size());
    for (std::uint64_t x = 1; x <= half; ++x) {
        const std::uint64_t xi = inv[x];
        for (std::size_t i = 0; i < ts.size(); ++i) {
            std::uint64_t j = x + mm(ts[i], xi);
            if (j >= p) j -= p;
            sums[i].add(tabulate ? costab[j] : std::cos(scale * static_cast<double>(j)));
        }
    }
    for (std::size_t i = 0; i < ts.size(); ++i) out[i] = 2.0 * sums[i].value();
}

// K(a, b_i; p) for a prime p, values written to out.
void kloosterman_prime(std::int64_t a, const std::vector<std::int64_t>& bs, std::int64_t p,
                       std::vector<double>& out) {
    out.assign(bs.size(), 0.0);
    a = mod(a, p);
    std::vector<std::uint64_t> ts;
    std::vector<std::size_t> slots;
    for (std::size_t i = 0; i < bs.size(); ++i) {
        const std::int64_t b = mod(bs[i], p);
        if (p == 2) {
            out[i] = ((a + b) % 2 == 0) ? 1.0 : -1.0;
        } else if (a == 0 && b == 0) {
            out[i] = static_cast<double>(p - 1);
        } else if (a == 0 || b == 0) {
            out[i] = -1.0;
        } else {
            ts.push_back(static_cast<std::uint64_t>(a * b % p));
            slots.push_back(i);
        }
    }
    if (ts.empty()) return;
    // Entries with equal t share one evaluation.
    std::vector<std::uint64_t> unique = ts;
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    std::vector<double> values;
    kloosterman_unit_prime(static_cast<std::uint64_t>(p), unique, values);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const auto pos = std::lower_bound(unique.begin(), unique.end(), ts[i]) - unique.begin();
        out[slots[i]] = values[static_cast<std::size_t>(pos)];
    }
}

}  // namespace

NotInvertible::NotInvertible(std::int64_t x, std::int64_t c)
    : std::domain_error(std::to_string(x) + " is not invertible modulo " + std::to_string(c)) {}

std::int64_t gcd(std::int64_t a, std::int64_t b) noexcept {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

std::int64_t mod_inverse(std::int64_t x, std::int64_t c) {
    check_modulus(c);
    if (c == 1) return 0;
    const auto [g, s] = bezout(mod(x, c), c);
    if (g != 1) throw NotInvertible(x, c);
    return mod(s, c);
}

double kloosterman(std::int64_t a, std::int64_t b, std::int64_t c) {
    check_modulus(c);
    if (c == 1) return 1.0;
    a = mod(a, c);
    b = mod(b, c);
    const double scale = kTwoPi / static_cast<double>(c);
    CompensatedSum re;
    CompensatedSum im;
    std::int64_t units = 0;
    for (std::int64_t x = 1; x < c; ++x) {
        const auto [g, s] = bezout(x, c);
        if (g != 1) continue;
        ++units;
        const std::int64_t xi = mod(s, c);
        const std::int64_t j = (a * x % c + b * xi % c) % c;
        const double angle = scale * static_cast<double>(j);
        re.add(std::cos(angle));
        im.add(std::sin(angle));
    }
    const double limit = 1e-10 * static_cast<double>(units > 1 ? units : 1);
    if (std::abs(im.value()) >= limit) {
        throw std::runtime_error("Kloosterman sum has imaginary part " +
                                 std::to_string(im.value()) + " for c = " + std::to_string(c));
    }
    return re.value();
}

double kloosterman_factored(std::int64_t a, std::int64_t b, std::int64_t c) {
    return kloosterman_batch(a, {b}, c).front();
}

std::vector<double> kloosterman_batch(std::int64_t a, const std::vector<std::int64_t>& bs,
                                      std::int64_t c) {
    check_modulus(c);
    std::vector<double> result(bs.size(), 1.0);
    if (c == 1) return result;
    std::vector<std::int64_t> local(bs.size());
    std::vector<double> factor;
    for (const auto& [p, e] : factorize(c)) {
        std::int64_t q = 1;
        for (int i = 0; i < e; ++i) q *= p;
        const std::int64_t u = mod_inverse(c / q, q);
        const std::int64_t aq = mod(a, q) * u % q;
        for (std::size_t i = 0; i < bs.size(); ++i) local[i] = mod(bs[i], q) * u % q;
        if (e == 1) {
            kloosterman_prime(aq, local, p, factor);
        } else {
            factor.resize(bs.size());
            for (std::size_t i = 0; i < bs.size(); ++i) {
                factor[i] = kloosterman_prime_power(aq, local[i], q, p);
            }
        }
        for (std::size_t i = 0; i < bs.size(); ++i) result[i] *= factor[i];
    }
    return result;
}

mpz_class divisor_sigma(unsigned k, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("divisor_sigma needs n >= 1");
    mpz_class total = 0;
    for (std::int64_t d = 1; d * d <= n; ++d) {
        if (n % d != 0) continue;
        mpz_class term;
        mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(d), k);
        total += term;
        const std::int64_t e = n / d;
        if (e != d) {
            mpz_ui_pow_ui(term.get_mpz_t(), static_cast<unsigned long>(e), k);
            total += term;
        }
    }
    return total;
}

std::int64_t divisor_count(std::int64_t n) {
    std::int64_t count = 1;
    for (const auto& [p, e] : factorize(n)) count *= (e + 1);
    return count;
}

std::int64_t euler_phi(std::int64_t n) {
    std::int64_t phi = n;
    for (const auto& [p, e] : factorize(n)) phi = phi / p * (p - 1);
    return phi;
}

std::vector<std::pair<std::int64_t, int>> factorize(std::int64_t n) {
    if (n < 1) throw std::invalid_argument("factorize needs n >= 1");
    std::vector<std::pair<std::int64_t, int>> out;
    auto strip = [&](std::int64_t p) {
        int e = 0;
        while (n % p == 0) {
            n /= p;
            ++e;
        }
        if (e > 0) out.emplace_back(p, e);
    };
    strip(2);
    strip(3);
    for (std::int64_t p = 5; p * p <= n; p += 6) {
        strip(p);
        strip(p + 2);
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

bool is_prime(std::int64_t n) {
    if (n < 2) return false;
    const auto f = factorize(n);
    return f.size() == 1 && f.front().second == 1;
}

}  // namespace svp::arith
