#pragma once

// Coverage properties for positions drawn i.i.d. from a general parent pdf g.
// Slacks are no longer exchangeable, so each slack gets its own marginal from
// the joint density of consecutive order statistics, integrated numerically.

#include "swarmcov/asymptotics.hpp"
#include "swarmcov/parent.hpp"
#include "swarmcov/quadrature.hpp"
#include "swarmcov/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace swarmcov::nonuniform {

namespace detail {

inline std::size_t require_pairs(const CoverageScenario& scn, const ParentDistribution& parent)
{
    scn.validate();
    require(std::abs(parent.support() - scn.s) <= 1e-12 * scn.s,
            "parent support must equal the boundary length s");
    const std::size_t n = scn.robots();
    require(n >= 2, "non-uniform slack kernels need integer n >= 2");
    return n;
}

inline double log_or_minus_inf(double v) { return v > 0 ? std::log(v) : -INFINITY; }

/// log of n! / ((i-1)! (n-i-1)!).
inline double log_pair_coefficient(std::size_t n, std::size_t i)
{
    return std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(i))
           - std::lgamma(static_cast<double>(n - i));
}

/// Joint density of (X(i), X(i+1)) at (t, t + x), in log space to survive
/// large n.
inline double pair_kernel(const ParentDistribution& parent, std::size_t n, std::size_t i,
                          double log_coef, double t, double x)
{
    const double g1 = parent.pdf(t);
    const double g2 = parent.pdf(t + x);
    if (g1 <= 0 || g2 <= 0) {
        return 0.0;
    }
    const double below = parent.cdf(t);
    const double above = 1.0 - parent.cdf(t + x);
    double lg = log_coef + std::log(g1) + std::log(g2);
    if (i > 1) {
        lg += static_cast<double>(i - 1) * log_or_minus_inf(below);
    }
    if (n - i > 1) {
        lg += static_cast<double>(n - i - 1) * log_or_minus_inf(above);
    }
    return std::exp(lg);
}

/// P(S_{i+1} <= threshold) for the interior pair (X(i), X(i+1)).
inline double pair_within(const ParentDistribution& parent, std::size_t n, std::size_t i,
                          double threshold, const QuadraturePolicy& qp)
{
    const double s = parent.support();
    const double log_coef = log_pair_coefficient(n, i);
    const auto marginal = [&](double x) {
        return integrate([&](double t) { return pair_kernel(parent, n, i, log_coef, t, x); }, 0.0,
                         s - x, qp);
    };
    return std::clamp(integrate(marginal, 0.0, std::min(threshold, s), qp), 0.0, 1.0);
}

} // namespace detail

/// P(X(i) <= t) = sum_{j >= i} C(n, j) G^j (1 - G)^(n-j).
inline double order_statistic_cdf(const ParentDistribution& parent, std::size_t n, std::size_t i,
                                  double t)
{
    require(i >= 1 && i <= n, "order statistic index must lie in [1, n]");
    const double G = std::clamp(parent.cdf(t), 0.0, 1.0);
    if (G <= 0) {
        return 0.0;
    }
    if (G >= 1) {
        return 1.0;
    }
    const double lg = std::log(G);
    const double lq = std::log1p(-G);
    double sum = 0.0;
    for (std::size_t j = i; j <= n; ++j) {
        const double lc = std::lgamma(n + 1.0) - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0);
        sum += std::exp(lc + j * lg + (n - j) * lq);
    }
    return std::clamp(sum, 0.0, 1.0);
}

/// Density of the slack between X(i) and X(i+1) at x, 1 <= i <= n-1.
inline double slack_marginal_nu(const CoverageScenario& scn, const ParentDistribution& parent,
                                std::size_t i, double x, const QuadraturePolicy& qp = {})
{
    const std::size_t n = detail::require_pairs(scn, parent);
    require(i >= 1 && i + 1 <= n, "pair index i must lie in [1, n-1]");
    require(x >= 0 && x <= scn.s, "slack must lie in [0, s]");
    const double log_coef = detail::log_pair_coefficient(n, i);
    return integrate(
        [&](double t) { return detail::pair_kernel(parent, n, i, log_coef, t, x); }, 0.0,
        scn.s - x, qp);
}

/// P(X(i+1) - X(i) <= d).
inline double p_slack_connected_nu(const CoverageScenario& scn, const ParentDistribution& parent,
                                   std::size_t i, const QuadraturePolicy& qp = {})
{
    const std::size_t n = detail::require_pairs(scn, parent);
    require(i >= 1 && i + 1 <= n, "pair index i must lie in [1, n-1]");
    return detail::pair_within(parent, n, i, scn.d, qp);
}

/// Per-slack probabilities P(S_j <= d) for j = 1..n+1, with interior slacks
/// tested against `interior_threshold` (d for connectivity, 2d for sensing).
inline std::vector<double> slack_connection_probabilities(const CoverageScenario& scn,
                                                          const ParentDistribution& parent,
                                                          double interior_threshold,
                                                          const QuadraturePolicy& qp = {})
{
    const std::size_t n = detail::require_pairs(scn, parent);
    std::vector<double> p(n + 1);
    p.front() = order_statistic_cdf(parent, n, 1, scn.d);
    p.back() = scn.d >= scn.s ? 1.0 : 1.0 - order_statistic_cdf(parent, n, n, scn.s - scn.d);
    for (std::size_t i = 1; i < n; ++i) {
        p[i] = detail::pair_within(parent, n, i, interior_threshold, qp);
    }
    return p;
}

/// 1 + sum over interior slacks of P(slack > d).
inline double expected_cmp_nu(const CoverageScenario& scn, const ParentDistribution& parent,
                              const QuadraturePolicy& qp = {})
{
    const std::size_t n = detail::require_pairs(scn, parent);
    double e = 1.0;
    for (std::size_t i = 1; i < n; ++i) {
        e += 1.0 - detail::pair_within(parent, n, i, scn.d, qp);
    }
    return e;
}

/// (n-1) P(|X_1 - X_2| <= d), the probability as a 2-D integral of 2 g g over
/// x1 <= x2 <= min(x1 + d, s).
inline double expected_deg_nu(const CoverageScenario& scn, const ParentDistribution& parent,
                              const QuadraturePolicy& qp = {})
{
    scn.validate();
    require(scn.n >= 2, "expected degree needs n >= 2");
    require(std::abs(parent.support() - scn.s) <= 1e-12 * scn.s,
            "parent support must equal the boundary length s");
    const double s = scn.s;
    const double d = std::min(scn.d, s);
    const auto outer = [&](double x1) {
        const double inner = integrate([&](double x2) { return parent.pdf(x2); }, x1,
                                       std::min(x1 + d, s), qp);
        return 2.0 * parent.pdf(x1) * inner;
    };
    const double split = s - d;
    const double p = integrate(outer, 0.0, split, qp) + integrate(outer, split, s, qp);
    return (scn.n - 1.0) * std::clamp(p, 0.0, 1.0);
}

/// Poisson rates from the per-slack probabilities.
inline asymptotics::PoissonRates poisson_rates_nu(const CoverageScenario& scn,
                                                  const ParentDistribution& parent,
                                                  const QuadraturePolicy& qp = {})
{
    const std::vector<double> con = slack_connection_probabilities(scn, parent, scn.d, qp);
    const std::vector<double> sen = slack_connection_probabilities(scn, parent, 2 * scn.d, qp);
    asymptotics::PoissonRates r;
    r.lambda_cmp = 1.0;
    for (std::size_t j = 0; j < con.size(); ++j) {
        r.lambda_mon += con[j];
        r.lambda_sen += sen[j];
        if (j > 0 && j + 1 < con.size()) {
            r.lambda_con += con[j];
            r.lambda_cmp += 1.0 - con[j];
        }
    }
    return r;
}

inline double p_mon_poisson_nu(const CoverageScenario& scn, const ParentDistribution& parent,
                               const QuadraturePolicy& qp = {})
{
    return asymptotics::poisson_pmf(poisson_rates_nu(scn, parent, qp).lambda_mon, scn.n + 1.0);
}

inline double p_con_poisson_nu(const CoverageScenario& scn, const ParentDistribution& parent,
                               const QuadraturePolicy& qp = {})
{
    return asymptotics::poisson_pmf(poisson_rates_nu(scn, parent, qp).lambda_con, scn.n - 1.0);
}

inline double p_sen_poisson_nu(const CoverageScenario& scn, const ParentDistribution& parent,
                               const QuadraturePolicy& qp = {})
{
    return asymptotics::poisson_pmf(poisson_rates_nu(scn, parent, qp).lambda_sen, scn.n + 1.0);
}

} // namespace swarmcov::nonuniform
