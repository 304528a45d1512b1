#pragma once

// Threshold estimates and Poisson approximations of the coverage properties.

#include "swarmcov/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string_view>

namespace swarmcov::asymptotics {

/// Lower real branch W_{-1}(x) for x in [-1/e, 0), by Halley iteration.
inline double lambert_w_minus1(double x)
{
    const double branch_point = -1.0 / std::numbers::e;
    require(x >= branch_point && x < 0, "W_{-1} is real only on [-1/e, 0)");
    if (x == branch_point) {
        return -1.0;
    }
    double w;
    if (x < -0.25) {
        // Series around the branch point.
        const double p = -std::sqrt(2.0 * (1.0 + std::numbers::e * x));
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
    } else {
        const double l1 = std::log(-x);
        const double l2 = std::log(-l1);
        w = l1 - l2 + l2 / l1;
    }
    for (int iter = 0; iter < 100; ++iter) {
        const double ew = std::exp(w);
        const double f = w * ew - x;
        const double wp1 = w + 1.0;
        if (wp1 == 0.0) {
            break;
        }
        const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if (std::abs(step) <= 1e-15 * std::abs(w)) {
            break;
        }
    }
    return w;
}

/// Swarm size whose expected longest slack equals d: the solution of
/// log(n+1)/(n+1) = d/s on the large-n branch, n = exp(-W_{-1}(-d/s)) - 1.
inline double monitoring_guess_n(double s, double d)
{
    require(s > 0 && d > 0 && d < s, "monitoring guess needs 0 < d < s");
    const double ratio = d / s;
    require(ratio < 1.0 / std::numbers::e,
            "monitoring guess: d/s >= 1/e has no solution on the large-n branch");
    return std::exp(-lambert_w_minus1(-ratio)) - 1.0;
}

/// Sharp monitoring threshold n = s ln(s) / d.
inline double sharp_threshold_n(double s, double d)
{
    require(s > 1 && d > 0, "sharp threshold needs s > 1 and d > 0");
    return s * std::log(s) / d;
}

struct PoissonRates {
    double lambda_mon = 0.0;
    double lambda_con = 0.0;
    double lambda_sen = 0.0;
    double lambda_cmp = 0.0;
};

/// Means of N_mon, N_con, N_sen and cmp for the uniform parent.
inline PoissonRates poisson_rates(const CoverageScenario& scn)
{
    scn.validate();
    const double n = scn.n;
    const double q1 = std::pow(1.0 - scn.d / scn.s, n);
    const double q2 = std::pow(std::max(1.0 - 2.0 * scn.d / scn.s, 0.0), n);
    const double p1 = 1.0 - q1;
    const double p2 = 1.0 - q2;
    return {(n + 1.0) * p1, (n - 1.0) * p1, (n - 1.0) * p2 + 2.0 * p1, 1.0 + (n - 1.0) * q1};
}

/// Poisson pmf lambda^k e^-lambda / k!, in log space; 0^0 = 1.
inline double poisson_pmf(double lambda, double k)
{
    require(lambda >= 0 && k >= 0, "poisson pmf needs lambda >= 0 and k >= 0");
    if (lambda == 0.0) {
        return k == 0.0 ? 1.0 : 0.0;
    }
    return std::exp(k * std::log(lambda) - lambda - std::lgamma(k + 1.0));
}

/// P(N_mon = n+1) under Poi(lambda_mon).
inline double p_mon_poisson(const CoverageScenario& scn)
{
    return poisson_pmf(poisson_rates(scn).lambda_mon, scn.n + 1.0);
}

/// P(N_con = n-1) under Poi(lambda_con).
inline double p_con_poisson(const CoverageScenario& scn)
{
    return poisson_pmf(poisson_rates(scn).lambda_con, scn.n - 1.0);
}

/// P(N_sen = n+1) under Poi(lambda_sen).
inline double p_sen_poisson(const CoverageScenario& scn)
{
    return poisson_pmf(poisson_rates(scn).lambda_sen, scn.n + 1.0);
}

enum class DegreeRegime { thermodynamic, connectivity, superconnectivity, subconnectivity };

inline std::string_view to_string(DegreeRegime r)
{
    switch (r) {
    case DegreeRegime::thermodynamic: return "thermodynamic";
    case DegreeRegime::connectivity: return "connectivity";
    case DegreeRegime::superconnectivity: return "superconnectivity";
    case DegreeRegime::subconnectivity: return "subconnectivity";
    }
    return "?";
}

struct RegimeBounds {
    double lower = 0.5;
    double upper = 2.0;
};

/// Classifies (n, d/s): n d/s within the bounds is the thermodynamic limit,
/// n d/s / ln n within the bounds the connectivity regime, above it the
/// superconnectivity regime and anything else the subconnectivity regime.
/// The thermodynamic test is applied first.
inline DegreeRegime degree_regime(double n, double d_over_s, RegimeBounds bounds = {})
{
    require(n >= 2, "degree regime needs n >= 2");
    require(bounds.lower > 0 && bounds.lower <= bounds.upper, "regime bounds need 0 < c1 <= c2");
    const double x = d_over_s * n;
    if (x >= bounds.lower && x <= bounds.upper) {
        return DegreeRegime::thermodynamic;
    }
    const double y = x / std::log(n);
    if (y >= bounds.lower && y <= bounds.upper) {
        return DegreeRegime::connectivity;
    }
    return y > bounds.upper ? DegreeRegime::superconnectivity : DegreeRegime::subconnectivity;
}

/// Total-variation bound (1 - e^-lambda)(1 - Var(W)/lambda) between a sum of
/// negatively associated indicators and Poi(lambda).
inline double tv_bound(double lambda, double variance)
{
    require(lambda >= 0 && variance >= 0, "tv bound needs lambda, variance >= 0");
    require(variance <= lambda, "tv bound needs variance <= lambda");
    if (lambda == 0.0) {
        return 0.0;
    }
    return (1.0 - std::exp(-lambda)) * (1.0 - variance / lambda);
}

} // namespace swarmcov::asymptotics
