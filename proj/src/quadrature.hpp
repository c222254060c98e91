#pragma once

#include "crnet/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace crnet::detail {

inline constexpr double quad_abs_tol = 1e-10;

/// Adaptive 61-point Gauss-Kronrod over [a, b], split into `panels` equal
/// pieces so oscillatory integrands get enough resolution. Throws
/// NumericalError when the error estimate exceeds both the absolute
/// tolerance and 1e-10 relative to the L1 norm.
template <class F>
double integrate(F&& f, double a, double b, int panels = 1, const char* what = "integral") {
    using gk = boost::math::quadrature::gauss_kronrod<double, 61>;
    panels = std::max(1, panels);
    const double width = (b - a) / panels;
    double total = 0.0, total_err = 0.0, total_l1 = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double hi = (p + 1 == panels) ? b : lo + width;
        double err = 0.0, l1 = 0.0;
        total += gk::integrate(f, lo, hi, 20, 1e-14, &err, &l1);
        total_err += err;
        total_l1 += l1;
    }
    if (!std::isfinite(total) || (total_err > quad_abs_tol && total_err > 1e-10 * total_l1))
        throw NumericalError(std::string(what) + ": quadrature did not converge (error estimate " +
                                 std::to_string(total_err) + ")",
                             total_err);
    return total;
}

}  // namespace crnet::detail
