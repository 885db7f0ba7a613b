#include "svp/forms_catalog.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "svp/arith.hpp"

#ifndef SVP_DEFAULT_DATA_DIR
#define SVP_DEFAULT_DATA_DIR "data"
#endif

namespace svp::catalog {

namespace {

using qexp::EtaFactor;
using qexp::QSeries;

const std::vector<RankTwoCase> kTable = {
    {1, 12, false}, {1, 16, false}, {1, 18, false}, {1, 20, false}, {1, 22, false},
    {1, 26, false}, {2, 8, false},  {2, 10, false}, {3, 6, false},  {3, 8, false},
    {4, 6, false},  {5, 4, false},  {5, 6, false},  {6, 4, false},  {7, 4, false},
    {8, 4, false},  {9, 4, true},   {11, 2, false}, {14, 2, false}, {15, 2, false},
    {17, 2, false}, {19, 2, false}, {20, 2, false}, {21, 2, false}, {24, 2, false},
    {27, 2, true},  {32, 2, true},  {36, 2, true},  {49, 2, true},
};

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_integer_token(const std::string& s) {
    std::size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') return false;
    }
    return true;
}

bool is_natural_token(const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s) {
        if (ch < '0' || ch > '9') return false;
    }
    return true;
}

std::int64_t parse_int64(const std::string& token, const std::string& name, std::size_t line) {
    if (!is_integer_token(token)) throw ParseError(name, line, "malformed integer '" + token + "'");
    try {
        return std::stoll(token);
    } catch (const std::out_of_range&) {
        throw ParseError(name, line, "integer out of range '" + token + "'");
    }
}

mpq_class parse_rational(const std::string& token, const std::string& name, std::size_t line) {
    const auto slash = token.find('/');
    const std::string num = token.substr(0, slash);
    if (!is_integer_token(num)) throw ParseError(name, line, "malformed rational '" + token + "'");
    mpz_class p(num[0] == '+' ? num.substr(1) : num, 10);
    mpz_class q = 1;
    if (slash != std::string::npos) {
        const std::string den = token.substr(slash + 1);
        if (!is_natural_token(den)) throw ParseError(name, line, "malformed rational '" + token + "'");
        q = mpz_class(den, 10);
        if (q == 0) throw ParseError(name, line, "zero denominator in '" + token + "'");
    }
    mpq_class out(p, q);
    out.canonicalize();
    return out;
}

// Strips a '#' comment and splits on whitespace.
std::vector<std::string> tokens_of(const std::string& raw) {
    const std::string line = raw.substr(0, raw.find('#'));
    std::istringstream ls(line);
    std::vector<std::string> out;
    std::string t;
    while (ls >> t) out.push_back(t);
    return out;
}

std::int64_t legendre(std::int64_t a, std::int64_t p) {
    a = arith::mod(a, p);
    if (a == 0) return 0;
    // Euler's criterion by square-and-multiply.
    std::int64_t result = 1;
    std::int64_t base = a;
    std::int64_t e = (p - 1) / 2;
    while (e > 0) {
        if (e & 1) result = result * base % p;
        base = base * base % p;
        e >>= 1;
    }
    return result == 1 ? 1 : -1;
}

}  // namespace

ParseError::ParseError(const std::string& path, std::size_t line, const std::string& what)
    : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}

const std::vector<RankTwoCase>& rank_two_table() { return kTable; }

std::optional<RankTwoCase> find_case(std::int64_t level, int weight) {
    for (const auto& c : kTable) {
        if (c.level == level && c.weight == weight) return c;
    }
    return std::nullopt;
}

RankTwoCase require_case(std::int64_t level, int weight) {
    if (auto c = find_case(level, weight)) return *c;
    throw std::invalid_argument("(N, weight) = (" + std::to_string(level) + ", " +
                                std::to_string(weight) + ") is not a rank-two case");
}

std::filesystem::path data_dir() {
    if (const char* env = std::getenv("SVP_DATA_DIR"); env != nullptr && *env != '\0') {
        return std::filesystem::path(env);
    }
    return std::filesystem::path(SVP_DEFAULT_DATA_DIR);
}

NewformSpec newform_spec(const RankTwoCase& c) {
    NewformSpec spec{c.level, c.weight, FileRecipe{}, c.cm, std::nullopt};
    if (c.level == 1) {
        switch (c.weight) {
            case 12: spec.recipe = ProductRecipe{0, 0}; break;
            case 16: spec.recipe = ProductRecipe{1, 0}; break;
            case 18: spec.recipe = ProductRecipe{0, 1}; break;
            case 20: spec.recipe = ProductRecipe{2, 0}; break;
            case 22: spec.recipe = ProductRecipe{1, 1}; break;
            case 26: spec.recipe = ProductRecipe{2, 1}; break;
            default: break;
        }
    } else {
        using V = std::vector<EtaFactor>;
        const auto key = c.level * 100 + c.weight;
        switch (key) {
            case 208: spec.recipe = V{{1, 8}, {2, 8}}; break;
            case 306: spec.recipe = V{{1, 6}, {3, 6}}; break;
            case 406: spec.recipe = V{{2, 12}}; break;
            case 504: spec.recipe = V{{1, 4}, {5, 4}}; break;
            case 604: spec.recipe = V{{1, 2}, {2, 2}, {3, 2}, {6, 2}}; break;
            case 804: spec.recipe = V{{2, 4}, {4, 4}}; break;
            case 904: spec.recipe = V{{3, 8}}; break;
            case 1102: spec.recipe = V{{1, 2}, {11, 2}}; break;
            case 1402: spec.recipe = V{{1, 1}, {2, 1}, {7, 1}, {14, 1}}; break;
            case 1502: spec.recipe = V{{1, 1}, {3, 1}, {5, 1}, {15, 1}}; break;
            case 2002: spec.recipe = V{{2, 2}, {10, 2}}; break;
            case 2402: spec.recipe = V{{2, 1}, {4, 1}, {6, 1}, {12, 1}}; break;
            case 2702: spec.recipe = V{{3, 2}, {9, 2}}; break;
            case 3202: spec.recipe = V{{4, 2}, {8, 2}}; break;
            case 3602: spec.recipe = V{{6, 4}}; break;
            default:
                spec.recipe = FileRecipe{"newforms/" + std::to_string(c.level) + "_" +
                                         std::to_string(c.weight) + ".qexp"};
                break;
        }
    }
    if (c.weight == 2) spec.curve = curve_model(c.level);
    return spec;
}

QSeries newform_qexp(const RankTwoCase& c, std::int64_t T) {
    if (!find_case(c.level, c.weight)) {
        throw std::invalid_argument("newform_qexp: (" + std::to_string(c.level) + ", " +
                                    std::to_string(c.weight) + ") is not in the table");
    }
    const NewformSpec spec = newform_spec(c);
    if (const auto* eta = std::get_if<std::vector<EtaFactor>>(&spec.recipe)) {
        return qexp::eta_quotient(*eta, T);
    }
    if (const auto* prod = std::get_if<ProductRecipe>(&spec.recipe)) {
        const QSeries e4 = qexp::eisenstein(4, T);
        const QSeries e6 = qexp::eisenstein(6, T);
        return qexp::delta(T) * e4.pow(prod->e4) * e6.pow(prod->e6);
    }
    const auto& file = std::get<FileRecipe>(spec.recipe).file;
    const QSeries f = load_qexp_file(data_dir() / file);
    if (f.precision() < T) {
        throw qexp::TruncationError(file + " is known to q^" + std::to_string(f.precision()) +
                                    ", q^" + std::to_string(T) + " requested");
    }
    if (f.valuation() != 1 || f.coeff(1) != 1) {
        throw std::runtime_error(file + " does not hold a normalized cusp form");
    }
    return f.truncate(T);
}

CurveModel curve_model(std::int64_t level) {
    const auto c = find_case(level, 2);
    if (!c) throw std::invalid_argument("level " + std::to_string(level) + " is not a weight-2 rank-two level");
    const auto path = data_dir() / "curves.txt";
    const std::string text = read_file(path);
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto tok = tokens_of(raw);
        if (tok.empty()) continue;
        if (tok.size() != 6) throw ParseError(path.string(), line, "expected 'N a1 a2 a3 a4 a6'");
        std::int64_t v[6];
        for (int i = 0; i < 6; ++i) v[i] = parse_int64(tok[static_cast<std::size_t>(i)], path.string(), line);
        if (v[0] != level) continue;
        CurveModel e{v[1], v[2], v[3], v[4], v[5]};
        if (e.discriminant() == 0) throw ParseError(path.string(), line, "singular model");
        return e;
    }
    throw std::runtime_error("no curve model for level " + std::to_string(level) + " in " + path.string());
}

QSeries parse_qexp(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    std::vector<std::pair<std::int64_t, mpq_class>> entries;
    while (std::getline(in, raw)) {
        ++line;
        const auto tok = tokens_of(raw);
        if (tok.empty()) continue;
        if (tok.size() != 2) throw ParseError(name, line, "expected '<exponent> <rational>'");
        const std::int64_t n = parse_int64(tok[0], name, line);
        if (!entries.empty() && n <= entries.back().first) {
            throw ParseError(name, line, "exponents must be strictly increasing");
        }
        entries.emplace_back(n, parse_rational(tok[1], name, line));
    }
    if (entries.empty()) throw ParseError(name, line, "no coefficients");
    const std::int64_t first = entries.front().first;
    const std::int64_t last = entries.back().first;
    std::vector<mpq_class> coeffs(static_cast<std::size_t>(last - first + 1), mpq_class(0));
    for (auto& [n, a] : entries) coeffs[static_cast<std::size_t>(n - first)] = std::move(a);
    return QSeries::from_coefficients(first, std::move(coeffs), last);
}

QSeries load_qexp_file(const std::filesystem::path& path) { return parse_qexp(read_file(path), path.string()); }

std::string format_qexp(const QSeries& f, const std::string& header) {
    std::ostringstream os;
    std::istringstream hs(header);
    std::string h;
    while (std::getline(hs, h)) os << "# " << h << '\n';
    const std::int64_t start = f.is_zero() ? f.precision() : f.valuation();
    for (std::int64_t n = start; n <= f.precision(); ++n) os << n << ' ' << f.coeff(n).get_str() << '\n';
    return os.str();
}

std::int64_t count_points(const CurveModel& e, std::int64_t p) {
    if (!arith::is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    std::int64_t count = 1;  // point at infinity
    auto m = [p](std::int64_t x) { return arith::mod(x, p); };
    if (p == 2) {
        for (std::int64_t x = 0; x < 2; ++x) {
            for (std::int64_t y = 0; y < 2; ++y) {
                const std::int64_t lhs = y * y + e.a1 * x * y + e.a3 * y;
                const std::int64_t rhs = x * x * x + e.a2 * x * x + e.a4 * x + e.a6;
                if (m(lhs - rhs) == 0) ++count;
            }
        }
        return count;
    }
    // y^2 + (a1 x + a3) y - f(x) = 0 has 1 + (D/p) roots, D = (a1 x + a3)^2 + 4 f(x).
    for (std::int64_t x = 0; x < p; ++x) {
        const std::int64_t lin = m(e.a1 * x + e.a3);
        const std::int64_t fx = m(m(m(x * x) * x) + m(e.a2 * m(x * x)) + m(e.a4 * x) + m(e.a6));
        const std::int64_t disc = m(lin * lin + 4 * fx);
        count += 1 + legendre(disc, p);
    }
    return count;
}

QSeries curve_qexp(const CurveModel& e, std::int64_t T) {
    if (T < 1) return QSeries::zero(T);
    const std::int64_t disc = e.discriminant();
    std::vector<mpz_class> a(static_cast<std::size_t>(T + 1), mpz_class(0));
    std::vector<bool> done(static_cast<std::size_t>(T + 1), false);
    a[1] = 1;
    done[1] = true;
    // Prime powers first, then extend multiplicatively in increasing n.
    for (std::int64_t p = 2; p <= T; ++p) {
        if (!arith::is_prime(p)) continue;
        const std::int64_t ap = p + 1 - count_points(e, p);
        const bool bad = disc % p == 0;
        mpz_class prev = 1;
        mpz_class cur = ap;
        for (std::int64_t q = p; q <= T; q *= p) {
            a[static_cast<std::size_t>(q)] = cur;
            done[static_cast<std::size_t>(q)] = true;
            mpz_class next = bad ? mpz_class(ap * cur) : mpz_class(ap * cur - p * prev);
            prev = cur;
            cur = next;
            if (q > T / p) break;
        }
    }
    for (std::int64_t n = 2; n <= T; ++n) {
        if (done[static_cast<std::size_t>(n)]) continue;
        const auto f = arith::factorize(n);
        std::int64_t q = 1;
        for (int i = 0; i < f.front().second; ++i) q *= f.front().first;
        a[static_cast<std::size_t>(n)] = a[static_cast<std::size_t>(q)] * a[static_cast<std::size_t>(n / q)];
        done[static_cast<std::size_t>(n)] = true;
    }
    std::vector<mpq_class> coeffs(static_cast<std::size_t>(T));
    for (std::int64_t n = 1; n <= T; ++n) coeffs[static_cast<std::size_t>(n - 1)] = mpq_class(a[static_cast<std::size_t>(n)]);
    return QSeries::from_coefficients(1, std::move(coeffs), T);
}

}  // namespace svp::catalog
