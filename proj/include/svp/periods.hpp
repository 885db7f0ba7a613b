#pragma once

// Periods and quasi-periods of elliptic curves, period matrices and their
// single-valued matrices S = P^-1 conj(P).

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "svp/forms_catalog.hpp"

namespace svp::periods {

using cplx = std::complex<double>;
using CMatrix = std::vector<std::vector<cplx>>;
using RMatrix = std::vector<std::vector<double>>;

class SingularCurve : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Raised for a singular matrix or a matrix that should be real but is not.
class InconsistentMatrix : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PeriodLattice {
    cplx omega1, omega2;  // periods of dx / (2y + a1 x + a3)
    cplx eta1, eta2;      // periods of x dx / (2y + a1 x + a3)
    cplx tau() const { return omega2 / omega1; }
    /// Rows indexed by homology cycles, columns by (omega, eta).
    CMatrix matrix() const { return {{omega1, eta1}, {omega2, eta2}}; }
};

/// Period basis with omega1 > 0 real and Im(omega2/omega1) > 0; for curves
/// with negative discriminant, Re(omega2) = omega1 / 2.
std::pair<cplx, cplx> curve_periods(const catalog::CurveModel& e);

/// Weierstrass quasi-periods eta_W(omega_i) = zeta(z + omega_i) - zeta(z).
/// Throws std::domain_error unless Im(omega2/omega1) > 0.
std::pair<cplx, cplx> weierstrass_quasi_periods(cplx omega1, cplx omega2);

/// Periods of (wp(z) + shift) dz along omega1, omega2, i.e.
/// -eta_W(omega_i) + shift * omega_i. For the differential x dx/(2y + ...)
/// of a model, shift = -b2/12.
std::pair<cplx, cplx> quasi_periods(cplx omega1, cplx omega2, double shift);

/// Periods and quasi-periods of a Weierstrass model.
PeriodLattice period_lattice(const catalog::CurveModel& e);

/// Normalized E_2, E_4, E_6 at tau, after reducing tau to the standard
/// fundamental domain where appropriate (E_2 is evaluated without reduction,
/// so the caller should reduce first).
cplx eisenstein_value(int weight, cplx tau);

struct SVMatrix {
    RMatrix s;   // 2d x 2d
    int weight;  // n
    int d;       // half-rank

    RMatrix block(int row, int col) const;  // row, col in {0, 1}
    RMatrix a() const { return block(0, 0); }
    RMatrix b() const { return block(0, 1); }
    RMatrix c() const { return block(1, 0); }
    RMatrix dblock() const { return block(1, 1); }
};

/// S = P^-1 conj(P). Throws InconsistentMatrix when P is singular or the
/// imaginary part of S exceeds 1e-9.
SVMatrix sv_matrix(const CMatrix& p, int weight);

/// S assembled from the rank-two scalars (c, rho): a = rho c, d = -a,
/// b = (1 - a^2)/c.
SVMatrix sv_from_c_rho(double c, double rho, int weight);

struct BlockReport {
    double c_symmetric = 0;       // |C - C^t|
    double d_relation = 0;        // |D - (-1)^n A^t|
    double b_relation = 0;        // |B - (1 - A^2) C^-1|
    double ca_relation = 0;       // |CA - (-1)^(n+1) A^t C|
    double involution = 0;        // |S^2 - 1|
    double trace = 0;             // |Tr S|
    bool c_invertible = true;

    double worst() const;
    bool passes(double tol) const { return c_invertible && worst() <= tol; }
};

/// Residuals (max-entry norms) of the polarized block relations.
BlockReport check_block_relations(const SVMatrix& s);

// Small dense helpers shared with the single-valued module.
CMatrix inverse(const CMatrix& m);
RMatrix inverse(const RMatrix& m);
RMatrix multiply(const RMatrix& a, const RMatrix& b);
CMatrix multiply(const CMatrix& a, const CMatrix& b);

}  // namespace svp::periods
