#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include <unistd.h>

#include "svp/forms_catalog.hpp"

using namespace svp::catalog;
using svp::qexp::QSeries;
namespace fs = std::filesystem;

namespace {

std::int64_t brute_points(const CurveModel& e, std::int64_t p) {
    std::int64_t n = 1;
    for (std::int64_t x = 0; x < p; ++x) {
        for (std::int64_t y = 0; y < p; ++y) {
            const std::int64_t v = y * y + e.a1 * x * y + e.a3 * y - (x * x * x + e.a2 * x * x + e.a4 * x + e.a6);
            if (((v % p) + p) % p == 0) ++n;
        }
    }
    return n;
}

// Copy of the shipped data into a scratch directory selected via SVP_DATA_DIR.
struct ScratchData {
    fs::path dir;
    ScratchData() {
        dir = fs::temp_directory_path() / ("svp_catalog_" + std::to_string(::getpid()));
        fs::remove_all(dir);
        fs::copy(SVP_TEST_DATA_DIR, dir, fs::copy_options::recursive);
        ::setenv("SVP_DATA_DIR", dir.c_str(), 1);
    }
    ~ScratchData() {
        ::unsetenv("SVP_DATA_DIR");
        fs::remove_all(dir);
    }
};

}  // namespace

TEST_CASE("the table") {
    const auto& t = rank_two_table();
    CHECK(t.size() == 29);
    std::set<std::pair<std::int64_t, int>> cm;
    for (const auto& c : t) {
        if (c.cm) cm.emplace(c.level, c.weight);
    }
    CHECK(cm == std::set<std::pair<std::int64_t, int>>{{9, 4}, {27, 2}, {32, 2}, {36, 2}, {49, 2}});
    CHECK(find_case(11, 2).has_value());
    CHECK_FALSE(find_case(11, 4).has_value());
    CHECK_THROWS_AS(require_case(1, 24), std::invalid_argument);
}

TEST_CASE("every newform is normalized with integral coefficients") {
    for (const auto& c : rank_two_table()) {
        const auto f = newform_qexp(c, 30);
        CHECK(f.valuation() == 1);
        CHECK(f[1] == 1);
        for (std::int64_t n = 1; n <= 30; ++n) CHECK(f[n].get_den() == 1);
        const auto spec = newform_spec(c);
        CHECK(spec.cm == c.cm);
        CHECK(spec.curve.has_value() == (c.weight == 2));
    }
}

TEST_CASE("eta-quotient newforms agree with curve point counts") {
    for (std::int64_t N : {11, 14, 15, 20, 24, 27, 32, 36}) {
        const auto c = require_case(N, 2);
        CHECK(newform_qexp(c, 200) == curve_qexp(curve_model(N), 200));
    }
}

TEST_CASE("Hasse bound and point counts") {
    for (const auto& c : rank_two_table()) {
        if (c.weight != 2) continue;
        const auto e = curve_model(c.level);
        CHECK(e.discriminant() != 0);
        for (std::int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}) {
            const auto n = count_points(e, p);
            CHECK(n == brute_points(e, p));
            CHECK((p + 1 - n) * (p + 1 - n) <= 4 * p);
        }
    }
    CHECK_THROWS_AS(count_points(curve_model(11), 9), std::invalid_argument);
    CHECK_THROWS_AS(curve_model(13), std::invalid_argument);
}

TEST_CASE("qexp text format round-trip") {
    const auto f = QSeries::from_coefficients(-1, {1, 0, mpq_class(-3, 7), 12});
    const auto text = format_qexp(f, "level 1\nexample");
    CHECK(text.rfind("# level 1\n# example\n", 0) == 0);
    CHECK(parse_qexp(text) == f);
}

TEST_CASE("parse errors carry line numbers") {
    auto line_of = [](const std::string& text) -> std::size_t {
        try {
            parse_qexp(text, "t");
        } catch (const ParseError& e) {
            return e.line();
        }
        return 0;
    };
    CHECK(line_of("1 1\n2 x\n") == 2);
    CHECK(line_of("# c\n1 1\n1 2\n") == 3);
    CHECK(line_of("1 1/0\n") == 1);
    CHECK(line_of("1 1 1\n") == 1);
    CHECK(line_of("99999999999999999999999 1\n") == 1);
    CHECK(line_of("1 99999999999999999999999\n") == 0);
    CHECK(line_of("# only a comment\n") == 1);
    CHECK(line_of("1 -3/4\n2 5\n") == 0);
}

TEST_CASE("data directory override and tamper detection") {
    ScratchData scratch;
    CHECK(data_dir() == scratch.dir);
    const auto c = require_case(2, 10);
    const auto good = newform_qexp(c, 50);
    CHECK(good[2] == 16);

    const auto path = scratch.dir / "newforms" / "2_10.qexp";
    auto f = load_qexp_file(path);
    std::ofstream(path) << format_qexp(f * mpq_class(2));
    CHECK_THROWS_AS(newform_qexp(c, 50), std::runtime_error);

    std::ofstream(path) << format_qexp(f.truncate(20));
    CHECK_THROWS_AS(newform_qexp(c, 50), svp::qexp::TruncationError);

    fs::remove(path);
    CHECK_THROWS_AS(newform_qexp(c, 50), std::runtime_error);

    std::ofstream(scratch.dir / "curves.txt") << "11 0 0 0 0 0\n";
    CHECK_THROWS_AS(curve_model(11), ParseError);
}
