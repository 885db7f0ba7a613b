#pragma once

// Exact q-expansions of classical modular forms and the operations on them:
// eta quotients, Eisenstein series, Delta, j, the Bol operator, Hecke
// operators, principal parts, the de Rham pairing and level-1 dual forms.
//
// Weights follow the convention "weight k + 2": functions taking `k` act on
// forms of weight k + 2 (so Delta has k = 10).

#include <cstdint>
#include <utility>
#include <vector>

#include "svp/qseries.hpp"

namespace svp::qexp {

/// One factor eta(d tau)^r of an eta quotient.
struct EtaFactor {
    std::int64_t d;
    std::int64_t r;
    bool operator==(const EtaFactor&) const = default;
};

/// prod_d eta(d tau)^(r_d), known up to q^T. Throws std::invalid_argument
/// when sum d*r_d is not divisible by 24.
QSeries eta_quotient(const std::vector<EtaFactor>& factors, std::int64_t T);

/// prod_{n>=1} (1 - q^n) up to q^T via the pentagonal number theorem.
QSeries euler_product(std::int64_t T);

/// Normalized E_2, E_4 or E_6 up to q^T.
QSeries eisenstein(int weight, std::int64_t T);

/// Delta = q prod (1 - q^n)^24 up to q^T.
QSeries delta(std::int64_t T);

/// j = E_4^3 / Delta up to q^T.
QSeries j_invariant(std::int64_t T);

/// D^(k+1) h, i.e. a_n -> n^(k+1) a_n.
QSeries bol(const QSeries& h, int k);

/// T_p on a holomorphic cusp expansion of weight k + 2, known up to q^floor(T/p).
QSeries hecke_tp(const QSeries& f, std::int64_t p, int k);

/// The same coefficient formula applied to a Laurent expansion, starting at
/// q^(p * valuation). Not known to represent T_p on de Rham classes.
QSeries hecke_tp_laurent(const QSeries& f, std::int64_t p, int k);

/// Coefficients with n <= 0. Throws TruncationError if the series is not
/// known up to q^0.
PrincipalPart principal_part(const QSeries& f);

/// k! sum_{n != 0} a_n(f) a_{-n}(g) / n^(k+1). Throws TruncationError when
/// the windows do not cover every cross term.
mpq_class de_rham_pairing(const QSeries& f, const QSeries& g, int k);

/// The level-1 forms of weight k + 2 with a one-dimensional cusp space.
bool is_level1_rank_two_weight(int weight);

/// The unique g of the given level-1 weight in Delta^-1 * span{E_4^b E_6^c}
/// with a_{-1}(g) = 1/k!, a_0(g) = 0 and a_1(g) = 0.
QSeries dual_form_level1(int weight, std::int64_t T);

/// T_n on a level-1 cusp expansion of weight k + 2:
/// b_j = sum_{d | gcd(n, j)} d^(k+1) a_{nj/d^2}, known up to q^floor(T/n).
QSeries hecke_tn(const QSeries& f, std::int64_t n, int k);

/// dim M_w(SL_2(Z)) and dim S_w(SL_2(Z)) for even w >= 0.
int level1_modular_dim(int weight);
int level1_cusp_dim(int weight);

/// Echelon basis b_1..b_d of S_w(SL_2(Z)) with b_i = q^i + O(q^(d+1)).
std::vector<QSeries> level1_cusp_basis(int weight, std::int64_t T);

/// Order of vanishing of an eta quotient at the cusp 1/c of Gamma_0(N),
/// c | N, measured in the local parameter at that cusp.
mpq_class eta_order_at_cusp(const std::vector<EtaFactor>& factors, std::int64_t N, std::int64_t c);

/// Hauptmodul t_N = q^-1 + O(1) of Gamma_0(N) for N in 2..9, as an eta
/// quotient with its only pole at the cusp infinity.
std::vector<EtaFactor> hauptmodul_recipe(std::int64_t N);

/// Solve A x = b exactly; throws std::domain_error if A is singular.
std::vector<mpq_class> solve_exact(std::vector<std::vector<mpq_class>> a, std::vector<mpq_class> b);

}  // namespace svp::qexp
