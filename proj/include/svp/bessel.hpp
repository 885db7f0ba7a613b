#pragma once

// Bessel functions J_nu and I_nu of positive integer order on the real
// half-line, in double precision with long double internals.

#include <stdexcept>

namespace svp::bessel {

class OutOfRange : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

inline constexpr double kMaxArgumentJ = 1e4;
inline constexpr double kMaxArgumentI = 700.0;

/// Arguments up to this value use the ascending series for J; above it the
/// normalised Miller backward recurrence takes over.
inline constexpr double kSeriesCrossoverJ = 12.0;

/// J_nu(x) for nu >= 1 and 0 <= x <= 1e4.
double bessel_j(int nu, double x);

/// I_nu(x) for nu >= 1 and 0 <= x <= 700.
double bessel_i(int nu, double x);

}  // namespace svp::bessel
