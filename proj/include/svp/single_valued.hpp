#pragma once

// Single-valued periods (c, rho) of rank-two cuspidal motives, from Poincare
// series (route B) and from elliptic-curve periods (route A), together with
// the rational-relation and Hecke-split computations built on them.
//
// Conventions: weight = k + 2, f is the normalized newform, c = s_21 and
// rho = s_11 / s_21 for the single-valued matrix S in the basis ([f], [g]).

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "svp/forms_catalog.hpp"
#include "svp/periods.hpp"
#include "svp/poincare.hpp"
#include "svp/qseries.hpp"
#include "svp/rational.hpp"

namespace svp::sv {

enum class Route { periods, poincare };

std::string to_string(Route r);

/// The requested route does not apply to the case.
class RouteUnavailable : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A Poincare evaluation in tolerance mode stopped at its hard cap.
class ToleranceNotMet : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One consistency deviation. `bound` is the numerical uncertainty the
/// deviation should be compared against (0 when not applicable).
struct Residual {
    std::int64_t m = 0;
    std::int64_t n = 0;
    double value = 0.0;
    double bound = 0.0;
};

struct RankTwoResult {
    double c = 0.0;
    double rho = 0.0;
    bool has_c = false;
    bool has_rho = false;
    Route route = Route::poincare;
    std::vector<Residual> residuals;
    std::string note;

    /// S assembled from (c, rho); requires both.
    periods::SVMatrix matrix(int weight) const;
};

/// Summation control used when the caller does not choose one: c <= 10^5
/// for weight 2, otherwise tolerance 10^-6 on the tail bound.
poincare::Control default_control(const catalog::RankTwoCase& c);

/// c from a_n(P_m) = -(k!/m^(k+1)) a_m(f) a_n(f) / c over the given (m, n)
/// pairs; the pair with the smallest relative tail wins and the residuals
/// hold each pair's relative deviation from it. Pairs with a_m(f) a_n(f) = 0
/// contribute their raw a_n(P_m) as a residual.
RankTwoResult rank2_c_from_poincare(const catalog::RankTwoCase& c,
                                    const std::vector<std::pair<std::int64_t, std::int64_t>>& pairs,
                                    const poincare::Control& control);

/// x(q) of the model along z = sum a_n(f) q^n / n, i.e. wp(z) - b2/12 with
/// g2 = c4/12, g3 = c6/216, known up to q^T. Needs a_1(f) = 1.
qexp::QSeries weierstrass_x_series(const catalog::CurveModel& e, const qexp::QSeries& f, std::int64_t T);

/// Hauptmodul t_N = q^-1 + O(1) for N in 2..9.
qexp::QSeries hauptmodul(std::int64_t N, std::int64_t T);

/// A form g with a_{-1}(g) = 1/k!, no other pole, representing the second
/// basis class: the level-1 dual form, g in span{t^2 f, t f, f} with
/// a_0 = a_1 = 0 for levels 2..9, and x * f for weight 2.
/// Throws RouteUnavailable for the remaining cases.
qexp::QSeries dual_form(const catalog::RankTwoCase& c, std::int64_t T);

/// Route B: rho = a_1(P_-1)/k! - a_1(g), with residuals
/// a_n(P_-1)/k! - (a_n(f) rho + a_n(g)) for n = 2..n_max, divided by
/// max(|a_n(P_-1)/k!|, 1). When g is not
/// given, dual_form is used. c is filled from the (1, 1) pair.
RankTwoResult rank2_rho_poincare(const catalog::RankTwoCase& c, const std::optional<qexp::QSeries>& g,
                                 std::int64_t n_max, const poincare::Control& control);

/// Route A: c = s_21 and rho = s_11 / s_21 from the period matrix of the
/// curve in the basis (dx/(2y + a1 x + a3), x dx/(2y + a1 x + a3)).
/// Residuals: |det P - 2 pi i| (m = n = 0) and the block-relation worst case.
RankTwoResult rank2_periods(const catalog::RankTwoCase& c);

struct PeriodPrediction {
    double a1_p1 = 0.0;   // a_1(P_{1,2,N}) = -2 pi i / (w1 conj(w2) - conj(w1) w2)
    double a1_pm1 = 0.0;  // a_1(P_{-1,2,N}) = s_11/s_21 + a_1(x f)
    double imag_p1 = 0.0; // imaginary part dropped from the first value
};

PeriodPrediction predicted_coeffs_from_periods(const catalog::CurveModel& e);

struct RelationResult {
    std::vector<double> lambda;
    std::vector<rational::Reconstruction> reconstructed;  // cap 10^4
    std::vector<Residual> residuals;                      // n = d+1..n_max
    std::optional<std::vector<mpq_class>> exact;          // level 1 only
};

/// Express P_m in the span of P_{m_1}, ..., P_{m_d} (d = basis size) from
/// the first d coefficients; residuals are the deviations above n = d.
/// Throws std::domain_error when the coefficient matrix is singular.
RelationResult poincare_rational_relations(std::int64_t N, int weight, std::int64_t m,
                                           const std::vector<std::int64_t>& basis, std::int64_t n_max,
                                           const poincare::Control& control);

/// Exact lambda at level 1 from the Hecke algebra, using P_m = T_m P_1 / m^(k+1):
/// T_m / m^(k+1) = sum lambda_i T_{m_i} / m_i^(k+1) on S_weight.
std::vector<mpq_class> exact_lambda_level1(int weight, std::int64_t m, const std::vector<std::int64_t>& basis);

/// Hecke operator T_n on the echelon basis of S_weight(SL_2(Z)), as the
/// matrix of coordinates (column j is the image of the j-th basis form).
std::vector<std::vector<mpq_class>> level1_hecke_matrix(int weight, std::int64_t n);

struct HeckeSplitEntry {
    std::vector<double> coeffs;        // a_1..a_{n_max} of the newform
    double c = 0.0;
    double rho = 0.0;
    std::vector<Residual> rho_residuals;  // n = 2..n_max, relative
};

struct HeckeSplitResult {
    std::vector<HeckeSplitEntry> forms;
    std::vector<Residual> roundtrip;  // a_n(P_m) rebuilt from (c_i, f_i) vs direct, relative
    double c_spread = 0.0;            // square vs overdetermined c solve, max relative difference
};

/// Per-newform (c_i, rho_i) at level 1. rho_i comes from the exact
/// isotypic dual g_i in the space of forms with poles of order <= d and
/// a_0 = 0, where T_p acts after reducing poles modulo the image of D^(k+1).
HeckeSplitResult hecke_split_sv(std::int64_t N, int weight, std::int64_t n_max, const poincare::Control& control);

struct RationalityEntry {
    std::int64_t n = 0;
    double value = 0.0;
    double tail = 0.0;        // Poincare tail estimate
    double resolution = 0.0;  // floating-point resolution of the value
    rational::Reconstruction nearest;
    bool resolved = true;     // resolution small enough to judge
};

struct RationalityReport {
    std::vector<RationalityEntry> entries;
    double tolerance = 0.0;
    std::int64_t max_den = 0;
    bool pass = false;
};

/// Compare a_n(P_-1), n = 1..n_max, with the nearest rational whose
/// denominator is at most rational::denominator_cap(tol). Entries whose
/// floating-point resolution exceeds tol/10 are listed but not judged; the
/// verdict needs at least one judged entry and all judged entries within tol.
RationalityReport cm_rationality_check(const catalog::RankTwoCase& c, std::int64_t n_max,
                                       const poincare::Control& control, double tol);

}  // namespace svp::sv
