#pragma once

#include "swarmcov/scenario.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>

namespace swarmcov {

struct QuadraturePolicy {
    double absolute_tolerance = 1e-8;
    double relative_tolerance = 1e-8;
    unsigned max_depth = 15;  ///< up to 2^15 subintervals

    void validate() const
    {
        require(absolute_tolerance > 0 && relative_tolerance > 0,
                "quadrature tolerances must be > 0");
    }
};

/// Adaptive 15-point Gauss-Kronrod integral of f over [a, b]. Throws when the
/// embedded error estimate stays above max(abs_tol, rel_tol * |integral|).
template <class F>
double integrate(F&& f, double a, double b, const QuadraturePolicy& policy = {})
{
    policy.validate();
    if (!(b > a)) {
        return 0.0;
    }
    using boost::math::quadrature::gauss_kronrod;
    double error = 0.0;
    double l1 = 0.0;
    // Boost's own stopping test can land a little above the tolerance it is
    // given, so it is asked for a tenth of the policy.
    const double value = gauss_kronrod<double, 15>::integrate(
        f, a, b, policy.max_depth, 0.1 * policy.relative_tolerance, &error, &l1);
    const double allowed = std::max(policy.absolute_tolerance, policy.relative_tolerance * l1);
    if (!(error <= allowed)) {
        char msg[160];
        std::snprintf(msg, sizeof msg,
                      "quadrature did not converge on [%g, %g]: error estimate %.3g > %.3g", a, b,
                      error, allowed);
        throw computation_error(msg);
    }
    return value;
}

} // namespace swarmcov
