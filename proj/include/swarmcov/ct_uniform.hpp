#pragma once

// Conflict-tolerant coverage properties for n robots placed i.i.d. uniformly on
// [0, s]. The slack vector is uniform on the simplex {s_i >= 0, sum s_i = s},
// every slack is distributed as s * Beta(1, n), and the events below reduce to
// inclusion-exclusion over how many slacks exceed d (or 2d).
//
// All sums accept real n through generalized binomials so the design solver
// can treat n as continuous.

#include "swarmcov/precision.hpp"
#include "swarmcov/scenario.hpp"
#include "swarmcov/volume.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace swarmcov::ct {

namespace detail {

inline double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

/// 1 - m d / s at working precision.
inline mp_real unit_base(const CoverageScenario& scn, double m, mpfr_prec_t bits)
{
    mp_real r(scn.d, bits);
    r /= scn.s;
    r *= m;
    return mp_real(1.0, bits) - r;
}

inline mp_real shifted(double n, double offset, mpfr_prec_t bits)
{
    mp_real r(n, bits);
    r += offset;
    return r;
}

} // namespace detail

/// P(a given slack is at most d) = 1 - (1 - d/s)^n.
inline double p_slack_connected(const CoverageScenario& scn)
{
    scn.validate();
    return 1.0 - std::pow(1.0 - scn.d / scn.s, scn.n);
}

/// Probability that every slack, end slacks included, is at most d.
inline double p_mon(const CoverageScenario& scn, const PrecisionPolicy& policy = {})
{
    scn.validate();
    const auto r = symmetric_pie_sum(
        scn.n_min() + 1,
        [&](std::size_t k, mpfr_prec_t bits) {
            return binomial_mp(detail::shifted(scn.n, 1.0, bits), k);
        },
        [&](std::size_t k, mpfr_prec_t bits) {
            return detail::unit_base(scn, static_cast<double>(k), bits);
        },
        scn.n, policy);
    return detail::clamp_probability(r.value);
}

/// p_mon through the volume kernels instead of the binomial closed form:
/// [Vol(S_full ∩ [0,d]^n) - Vol({sum <= s-d} ∩ [0,d]^n)] / (s^n / n!).
/// Requires integer n (the dimension of the slack simplex).
inline double p_mon_via_volumes(const CoverageScenario& scn, const PrecisionPolicy& policy = {},
                                std::size_t guard = exponential_guard)
{
    scn.validate();
    const std::size_t n = scn.robots();
    const std::vector<double> ones(n, 1.0);
    const std::vector<double> edges(n, scn.d);
    const auto r = evaluate_adaptive(policy, [&](mpfr_prec_t bits) {
        PieSum total = swarmcov::detail::box_volume_sum(ones, scn.s, edges, bits, guard);
        if (scn.s - scn.d > 0) {
            total.absorb(swarmcov::detail::box_volume_sum(ones, scn.s - scn.d, edges, bits, guard),
                         -1);
        }
        mp_real norm = swarmcov::detail::factorial_mp(n, bits);
        const mp_real s(scn.s, bits);
        norm /= pow_clamped(s, static_cast<unsigned long>(n));
        total.scale(norm);
        return total;
    });
    return detail::clamp_probability(r.value);
}

/// Probability that every interior slack is at most d (the graph is connected).
inline double p_con(const CoverageScenario& scn, const PrecisionPolicy& policy = {})
{
    scn.validate();
    const auto r = symmetric_pie_sum(
        scn.n_min() + 1,
        [&](std::size_t k, mpfr_prec_t bits) {
            return binomial_mp(detail::shifted(scn.n, -1.0, bits), k);
        },
        [&](std::size_t k, mpfr_prec_t bits) {
            return detail::unit_base(scn, static_cast<double>(k), bits);
        },
        scn.n, policy);
    return detail::clamp_probability(r.value);
}

/// P(cmp = k): exactly k-1 interior slacks exceed d. Integer n; any k in [1, n].
inline double cmp_pmf(const CoverageScenario& scn, std::size_t k,
                      const PrecisionPolicy& policy = {})
{
    scn.validate();
    const std::size_t n = scn.robots();
    require(k >= 1 && k <= n, "component count k must lie in [1, n]");
    const std::size_t top = std::min(n - 1, scn.n_min());
    if (k - 1 > top) {
        return 0.0;
    }
    const auto r = evaluate_adaptive(policy, [&](mpfr_prec_t bits) {
        PieSum out(bits);
        const mp_real interior(static_cast<double>(n - 1), bits);
        const mp_real e(scn.n, bits);
        for (std::size_t j = k - 1; j <= top; ++j) {
            mp_real c = binomial_mp(interior, j);
            c *= binomial_mp(mp_real(static_cast<double>(j), bits), k - 1);
            out.add(c * pow_clamped(detail::unit_base(scn, static_cast<double>(j), bits), e),
                    (j - (k - 1)) % 2 == 0 ? 1 : -1);
        }
        return out;
    });
    return detail::clamp_probability(r.value);
}

/// 1 + (n-1)(1 - d/s)^n.
inline double expected_cmp(const CoverageScenario& scn)
{
    scn.validate();
    return 1.0 + (scn.n - 1.0) * std::pow(1.0 - scn.d / scn.s, scn.n);
}

/// Probability that the boundary is fully sensed: end slacks <= d, interior
/// slacks <= 2d. Inclusion-exclusion over i violated slacks, split by how many
/// of the two end slacks are among them (0, 1 or 2), which removes 2i d,
/// (2i-1) d and (2i-2) d of length respectively.
inline double p_sen(const CoverageScenario& scn, const PrecisionPolicy& policy = {})
{
    scn.validate();
    const std::size_t top = scn.n_min();
    const auto r = evaluate_adaptive(policy, [&](mpfr_prec_t bits) {
        PieSum out(bits);
        const mp_real interior = detail::shifted(scn.n, -1.0, bits);
        const mp_real e(scn.n, bits);
        out.add(mp_real(1.0, bits));
        for (std::size_t i = 1; i <= top; ++i) {
            const double id = static_cast<double>(i);
            const int sign = (i % 2 == 1) ? -1 : 1;  // 1 - sum (-1)^(i-1) [...]
            out.add(binomial_mp(interior, i) * pow_clamped(detail::unit_base(scn, 2 * id, bits), e),
                    sign);
            mp_real two_ends = binomial_mp(interior, i - 1);
            two_ends *= 2.0;
            out.add(two_ends * pow_clamped(detail::unit_base(scn, 2 * id - 1, bits), e), sign);
            if (i >= 2) {
                out.add(binomial_mp(interior, i - 2)
                            * pow_clamped(detail::unit_base(scn, 2 * id - 2, bits), e),
                        sign);
            }
        }
        return out;
    });
    return detail::clamp_probability(r.value);
}

/// E(slen) = s * p_sen.
inline double expected_slen(const CoverageScenario& scn, const PrecisionPolicy& policy = {})
{
    return scn.s * p_sen(scn, policy);
}

/// P(|X_1 - X_2| <= d) for two uniform points: (2ds - d^2)/s^2.
inline double p_pair_within(const CoverageScenario& scn)
{
    scn.validate();
    return (2.0 * scn.d * scn.s - scn.d * scn.d) / (scn.s * scn.s);
}

/// E(deg) = (n-1)(2ds - d^2)/s^2.
inline double expected_deg(const CoverageScenario& scn)
{
    return (scn.n - 1.0) * p_pair_within(scn);
}

/// Density of the i-th ordered position: Beta(i, n-i+1) at x/s, scaled by 1/s.
inline double position_marginal_pdf(const CoverageScenario& scn, std::size_t i, double x)
{
    scn.validate();
    const std::size_t n = scn.robots();
    require(i >= 1 && i <= n, "position index must lie in [1, n]");
    require(x >= 0 && x <= scn.s, "position must lie in [0, s]");
    const double u = x / scn.s;
    const double alpha = static_cast<double>(i);
    const double beta = static_cast<double>(n - i + 1);
    const double log_norm = std::lgamma(alpha + beta) - std::lgamma(alpha) - std::lgamma(beta);
    return std::exp(log_norm) * std::pow(u, alpha - 1) * std::pow(1 - u, beta - 1) / scn.s;
}

/// Density of any single slack: (n/s)(1 - x/s)^(n-1).
inline double slack_marginal_pdf(const CoverageScenario& scn, double x)
{
    scn.validate();
    require(x >= 0 && x <= scn.s, "slack must lie in [0, s]");
    return scn.n / scn.s * std::pow(1.0 - x / scn.s, scn.n - 1.0);
}

} // namespace swarmcov::ct
