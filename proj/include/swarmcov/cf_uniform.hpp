#pragma once

// Conflict-free coverage with a uniform parent: robots of diameter D may not
// overlap each other or the boundary ends, so every slack is at least D. The
// configuration is uniform on the CF polytope {s_i >= D, sum s_i = s}, whose
// full-dimensional volume is s~^n / n! with s~ = s - (n+1)D.
//
// Exact values intersect the slack simplex with displaced hypercuboids
// [D, d]-style boxes; the free slack approximation (FSA) evaluates the CT
// closed forms at (s~, d~ = d - D).

#include "swarmcov/ct_uniform.hpp"
#include "swarmcov/precision.hpp"
#include "swarmcov/scenario.hpp"
#include "swarmcov/volume.hpp"

#include <algorithm>
#include <cstddef>
#include <string_view>
#include <vector>

namespace swarmcov::cf {

struct FreeSlackView {
    double s_tilde = 0.0;
    double d_tilde = 0.0;
};

inline FreeSlackView free_slack_view(const CoverageScenario& scn)
{
    scn.validate_cf();
    require(scn.d > scn.D, "free slack view needs d > D");
    return {scn.free_slack(), scn.d - scn.D};
}

enum class Property { p_mon, p_con, expected_cmp, p_sen, expected_slen, expected_deg, cmp_pmf };

/// The CT scenario (s~, min(d~, s~), D=0, n) that the FSA evaluates.
inline CoverageScenario substituted(const CoverageScenario& scn)
{
    const auto view = free_slack_view(scn);
    return {view.s_tilde, std::min(view.d_tilde, view.s_tilde), 0.0, scn.n};
}

/// Free slack approximation. `k` is only used for Property::cmp_pmf.
inline PropertyEstimate fsa_property(const CoverageScenario& scn, Property kind, std::size_t k = 1,
                                     const PrecisionPolicy& policy = {})
{
    const CoverageScenario sub = substituted(scn);
    double v = 0.0;
    switch (kind) {
    case Property::p_mon: v = ct::p_mon(sub, policy); break;
    case Property::p_con: v = ct::p_con(sub, policy); break;
    case Property::expected_cmp: v = ct::expected_cmp(sub); break;
    case Property::p_sen: v = ct::p_sen(sub, policy); break;
    // Sensed length is measured on the full boundary.
    case Property::expected_slen: v = scn.s * ct::p_sen(sub, policy); break;
    case Property::expected_deg: v = ct::expected_deg(sub); break;
    case Property::cmp_pmf: v = ct::cmp_pmf(sub, k, policy); break;
    }
    return {v, Method::fsa, 0.0};
}

namespace detail {

using swarmcov::detail::displaced_volume_sum;

inline void require_exact_cf(const CoverageScenario& scn)
{
    scn.validate_cf();
    (void)scn.robots();
}

/// n! / s~^n at working precision.
inline mp_real inverse_cf_volume(const CoverageScenario& scn, mpfr_prec_t bits)
{
    const std::size_t n = scn.robots();
    mp_real r = swarmcov::detail::factorial_mp(n, bits);
    r /= pow_clamped(mp_real(scn.free_slack(), bits), static_cast<unsigned long>(n));
    return r;
}

/// Vol(T(1,b) ∩ box) at fixed precision; empty when b <= 0.
inline PieSum region(double b, const HypercuboidSpec& box, mpfr_prec_t bits)
{
    if (b <= 0) {
        return PieSum(bits);
    }
    return displaced_volume_sum(SimplexSpec::unit(box.dimension(), b), box, bits,
                                exponential_guard);
}

/// Volume of {x in box : s - d <= 1^T x <= s - D}, i.e. the last slack lies in
/// [D, d], as Vol(S∩H) - Vol(S(s_{n+1} > d)∩H) - Vol(S(s_{n+1} < D)∩H).
inline PieSum last_slack_window(const CoverageScenario& scn, const HypercuboidSpec& box,
                                mpfr_prec_t bits)
{
    PieSum total = region(scn.s, box, bits);
    total.absorb(region(scn.s - scn.d, box, bits), -1);
    if (scn.D > 0) {
        PieSum conflict = region(scn.s, box, bits);
        conflict.absorb(region(scn.s - scn.D, box, bits), -1);
        total.absorb(conflict, -1);
    }
    return total;
}

inline double probability(const PrecisionPolicy& policy, const CoverageScenario& scn,
                          auto&& volume)
{
    const auto r = evaluate_adaptive(policy, [&](mpfr_prec_t bits) {
        PieSum v = volume(bits);
        v.scale(inverse_cf_volume(scn, bits));
        return v;
    });
    return std::clamp(r.value, 0.0, 1.0);
}

} // namespace detail

/// Exact CF monitoring probability: all n+1 slacks in [D, d].
inline double p_mon_exact(const CoverageScenario& scn, const PrecisionPolicy& policy = {})
{
    detail::require_exact_cf(scn);
    const std::size_t n = scn.robots();
    const HypercuboidSpec box{std::vector<double>(n, scn.D), std::vector<double>(n, scn.d)};
    return detail::probability(policy, scn, [&](mpfr_prec_t bits) {
        return detail::last_slack_window(scn, box, bits);
    });
}

/// Exact CF connectivity: interior slacks in [D, d], end slacks only >= D.
inline double p_con_exact(const CoverageScenario& scn, const PrecisionPolicy& policy = {})
{
    detail::require_exact_cf(scn);
    const std::size_t n = scn.robots();
    HypercuboidSpec box{std::vector<double>(n, scn.D), std::vector<double>(n, scn.d)};
    box.far[0] = scn.s;
    return detail::probability(policy, scn, [&](mpfr_prec_t bits) {
        return detail::region(scn.s - scn.D, box, bits);
    });
}

/// Exact CF full-sensing probability: end slacks in [D, d], interior in [D, 2d].
inline double p_sen_exact(const CoverageScenario& scn, const PrecisionPolicy& policy = {})
{
    detail::require_exact_cf(scn);
    const std::size_t n = scn.robots();
    HypercuboidSpec box{std::vector<double>(n, scn.D), std::vector<double>(n, 2 * scn.d)};
    box.far[0] = scn.d;
    return detail::probability(policy, scn, [&](mpfr_prec_t bits) {
        return detail::last_slack_window(scn, box, bits);
    });
}

inline double expected_slen_exact(const CoverageScenario& scn, const PrecisionPolicy& policy = {})
{
    return scn.s * p_sen_exact(scn, policy);
}

/// Exact CF P(cmp = k). Inclusion-exclusion over sets of j >= k-1 interior
/// slacks forced above d; by congruence each set size needs one displaced-box
/// volume, weighted by C(n-1, j) C(j, k-1).
inline double cmp_pmf_exact(const CoverageScenario& scn, std::size_t k,
                            const PrecisionPolicy& policy = {})
{
    detail::require_exact_cf(scn);
    const std::size_t n = scn.robots();
    require(k >= 1 && k <= n, "component count k must lie in [1, n]");
    return detail::probability(policy, scn, [&](mpfr_prec_t bits) {
        PieSum out(bits);
        for (std::size_t j = k - 1; j + 1 <= n; ++j) {
            HypercuboidSpec box{std::vector<double>(n, scn.D), std::vector<double>(n, scn.s)};
            for (std::size_t i = 1; i <= j; ++i) {
                box.near[i] = scn.d;
            }
            PieSum v = detail::region(scn.s - scn.D, box, bits);
            if (v.terms() == 0) {
                break;
            }
            mp_real weight = binomial_mp(mp_real(static_cast<double>(n - 1), bits), j);
            weight *= binomial_mp(mp_real(static_cast<double>(j), bits), k - 1);
            v.scale(weight);
            out.absorb(v, (j - (k - 1)) % 2 == 0 ? 1 : -1);
        }
        return out;
    });
}

/// E(cmp) = 1 + (n-1) P(one interior slack > d), the probability from a
/// single displaced-box volume.
inline double expected_cmp_exact(const CoverageScenario& scn, const PrecisionPolicy& policy = {})
{
    detail::require_exact_cf(scn);
    const std::size_t n = scn.robots();
    if (n < 2) {
        return 1.0;
    }
    HypercuboidSpec box{std::vector<double>(n, scn.D), std::vector<double>(n, scn.s)};
    box.near[1] = scn.d;
    const double gap = detail::probability(policy, scn, [&](mpfr_prec_t bits) {
        return detail::region(scn.s - scn.D, box, bits);
    });
    return 1.0 + static_cast<double>(n - 1) * gap;
}

} // namespace swarmcov::cf
