#pragma once

// Numerical Petersson norm of a level-1 cusp form from its q-expansion.

#include <stdexcept>

#include "svp/qseries.hpp"

namespace svp::petersson {

class QuadratureError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integral of |f(tau)|^2 y^weight dx dy / y^2 over the standard fundamental
/// domain of SL_2(Z), cut at Im tau = y_max. Only level 1 is supported;
/// throws std::invalid_argument otherwise, and QuadratureError when the
/// adaptive rule does not reach rel_tol or the expansion is too short to
/// resolve f to 1e-10 relative on the domain.
double petersson_norm_numeric(const qexp::QSeries& f, int weight, long level = 1, double rel_tol = 1e-10,
                              double y_max = 12.0);

}  // namespace svp::petersson
