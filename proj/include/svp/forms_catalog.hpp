#pragma once

// The rank-two case table, newform recipes, Weierstrass models for the
// weight-2 levels, and the plain-text q-expansion file format.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "svp/modular_forms.hpp"
#include "svp/qseries.hpp"

namespace svp::catalog {

struct RankTwoCase {
    std::int64_t level;
    int weight;  // k + 2
    bool cm;
    bool operator==(const RankTwoCase&) const = default;
};

/// The 29 pairs (N, k+2) with dim S_{k+2}(Gamma_0(N)) = 1.
const std::vector<RankTwoCase>& rank_two_table();

/// Table lookup; std::nullopt when (level, weight) is not a rank-two case.
std::optional<RankTwoCase> find_case(std::int64_t level, int weight);

/// Like find_case but throws std::invalid_argument.
RankTwoCase require_case(std::int64_t level, int weight);

/// y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6.
struct CurveModel {
    std::int64_t a1 = 0, a2 = 0, a3 = 0, a4 = 0, a6 = 0;

    std::int64_t b2() const { return a1 * a1 + 4 * a2; }
    std::int64_t b4() const { return 2 * a4 + a1 * a3; }
    std::int64_t b6() const { return a3 * a3 + 4 * a6; }
    std::int64_t b8() const {
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    }
    std::int64_t c4() const { return b2() * b2() - 24 * b4(); }
    std::int64_t c6() const { return -b2() * b2() * b2() + 36 * b2() * b4() - 216 * b6(); }
    std::int64_t discriminant() const {
        return -b2() * b2() * b8() - 8 * b4() * b4() * b4() - 27 * b6() * b6() + 9 * b2() * b4() * b6();
    }
    bool operator==(const CurveModel&) const = default;
};

/// Level-1 block Delta * E_4^e4 * E_6^e6.
struct ProductRecipe {
    int e4 = 0;
    int e6 = 0;
    bool operator==(const ProductRecipe&) const = default;
};

/// Expansion shipped as a data file (relative to the data directory).
struct FileRecipe {
    std::string file;
    bool operator==(const FileRecipe&) const = default;
};

using Recipe = std::variant<std::vector<qexp::EtaFactor>, ProductRecipe, FileRecipe>;

struct NewformSpec {
    std::int64_t level;
    int weight;
    Recipe recipe;
    bool cm;
    std::optional<CurveModel> curve;
};

/// Raised by load_qexp_file and the curve-file reader.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what);
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// $SVP_DATA_DIR if set, otherwise the directory configured at build time.
std::filesystem::path data_dir();

/// Recipe and metadata of the newform for a table case.
NewformSpec newform_spec(const RankTwoCase& c);

/// Normalized newform of the case up to q^T. File recipes throw
/// std::runtime_error when the file is missing and qexp::TruncationError when
/// it is too short.
qexp::QSeries newform_qexp(const RankTwoCase& c, std::int64_t T);

/// Minimal model of X_0(N) for a weight-2 table level, read from curves.txt.
CurveModel curve_model(std::int64_t level);

/// Parse the "<exponent> <rational>" format; the known window ends at the
/// last listed exponent.
qexp::QSeries load_qexp_file(const std::filesystem::path& path);

/// Parse the same format from a string (name is used in error messages).
qexp::QSeries parse_qexp(const std::string& text, const std::string& name = "<string>");

/// Serialize in the file format, listing every known coefficient from the
/// valuation through the precision.
std::string format_qexp(const qexp::QSeries& f, const std::string& header = {});

/// Number of points over F_p of the reduction, including the point at
/// infinity and any singular point.
std::int64_t count_points(const CurveModel& e, std::int64_t p);

/// q-expansion of the L-series of the curve, sum a_n q^n up to q^T, from
/// point counts a_p = p + 1 - #E(F_p).
qexp::QSeries curve_qexp(const CurveModel& e, std::int64_t T);

}  // namespace svp::catalog
