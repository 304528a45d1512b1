#pragma once

// Volumes of simplex / axis-aligned hypercuboid intersections by inclusion-
// exclusion over the box vertices.
//
//   T(a,b) = { x >= 0 : a^T x <= b },        a > 0, b > 0
//   H(c,f) = { c <= x <= f },                0 <= c <= f
//
// Vol(T ∩ prod[0,e_i]) = 1/(n! prod a_i) * sum_{v in {0,1}^n} (-1)^|v| max(b - a^T(e∘v), 0)^n
//
// Coordinates sharing the same (a_i, e_i) are grouped, which turns the 2^n
// vertex enumeration into a product of binomially weighted counts.

#include "swarmcov/precision.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

namespace swarmcov {

/// Exponential-cost guard: enumerations above 2^26 box vertices are refused.
inline constexpr std::size_t exponential_guard = 26;

struct SimplexSpec {
    std::vector<double> a;
    double b = 1.0;

    [[nodiscard]] std::size_t dimension() const { return a.size(); }

    void validate() const
    {
        require(!a.empty(), "simplex: dimension must be >= 1");
        for (double ai : a) {
            require(std::isfinite(ai) && ai > 0, "simplex: coefficients a_i must be > 0");
        }
        require(std::isfinite(b) && b > 0, "simplex: bound b must be > 0");
    }

    /// The unit-coefficient simplex {x >= 0 : sum x <= b} in n dimensions.
    static SimplexSpec unit(std::size_t n, double b) { return {std::vector<double>(n, 1.0), b}; }
};

struct HypercuboidSpec {
    std::vector<double> near;
    std::vector<double> far;

    [[nodiscard]] std::size_t dimension() const { return near.size(); }

    void validate() const
    {
        require(near.size() == far.size(), "hypercuboid: near/far dimensions differ");
        for (std::size_t i = 0; i < near.size(); ++i) {
            require(near[i] >= 0, "hypercuboid: near vertex must be >= 0");
            require(near[i] <= far[i], "hypercuboid: need near <= far componentwise");
        }
    }
};

namespace detail {

struct CoordinateGroup {
    double a = 1.0;
    double edge = 0.0;
    std::size_t count = 0;
};

inline std::vector<CoordinateGroup> group_coordinates(std::span<const double> a,
                                                      std::span<const double> edges)
{
    std::vector<CoordinateGroup> groups;
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const CoordinateGroup& g) {
            return g.a == a[i] && g.edge == edges[i];
        });
        if (it == groups.end()) {
            groups.push_back({a[i], edges[i], 1});
        } else {
            ++it->count;
        }
    }
    return groups;
}

inline double enumeration_size(const std::vector<CoordinateGroup>& groups)
{
    double total = 1.0;
    for (const auto& g : groups) {
        total *= static_cast<double>(g.count + 1);
    }
    return total;
}

inline void check_guard(double vertices, std::size_t guard)
{
    if (vertices > std::ldexp(1.0, static_cast<int>(guard))) {
        throw computation_error("exponential guard exceeded: " + std::to_string(vertices)
                                + " box vertices (limit 2^" + std::to_string(guard) + ")");
    }
}

inline mp_real factorial_mp(std::size_t n, mpfr_prec_t bits)
{
    mp_real r(1.0, bits);
    for (std::size_t j = 2; j <= n; ++j) {
        r *= static_cast<double>(j);
    }
    return r;
}

/// sum over vertices of (-1)^|v| mult(v) max(b - a^T(e∘v), 0)^n, unnormalized.
inline void accumulate_vertices(const std::vector<CoordinateGroup>& groups, std::size_t level,
                                const mp_real& base, const mp_real& multiplicity, int sign,
                                unsigned long dim, PieSum& out)
{
    if (level == groups.size()) {
        out.add(multiplicity * pow_clamped(base, dim), sign);
        return;
    }
    const auto& g = groups[level];
    mp_real weight(g.a, base.precision());
    weight *= g.edge;
    mp_real b(base);
    mp_real coeff(multiplicity);
    for (std::size_t j = 0; j <= g.count; ++j) {
        if (b.sign() <= 0) {
            break;  // every further vertex is outside the half-space
        }
        accumulate_vertices(groups, level + 1, b, coeff, (j % 2 == 0) ? sign : -sign, dim, out);
        b -= weight;
        coeff *= static_cast<double>(g.count - j);
        coeff.div_ui(static_cast<unsigned long>(j + 1));
    }
}

/// Lemma sum for Vol(T(a,b) ∩ prod[0,e_i]) at a fixed precision, normalized by
/// 1/(n! prod a_i). Zero edges yield an empty sum.
inline PieSum box_volume_sum(std::span<const double> a, double b, std::span<const double> edges,
                             mpfr_prec_t bits, std::size_t guard)
{
    PieSum out(bits);
    if (std::any_of(edges.begin(), edges.end(), [](double e) { return e <= 0; })) {
        return out;
    }
    const auto groups = group_coordinates(a, edges);
    check_guard(enumeration_size(groups), guard);
    accumulate_vertices(groups, 0, mp_real(b, bits), mp_real(1.0, bits), 1,
                        static_cast<unsigned long>(a.size()), out);
    mp_real norm = factorial_mp(a.size(), bits);
    for (double ai : a) {
        norm *= ai;
    }
    out.scale(mp_real(1.0, bits) / norm);
    return out;
}

struct DisplacedGroup {
    double a = 1.0;
    double near = 0.0;
    double far = 0.0;
    std::size_t count = 0;
};

/// Exterior inclusion-exclusion of the displaced-box algorithm at fixed precision.
///
/// V = Vol(T ∩ H(0,f)) + sum_{v != 0} (-1)^|v| Vol(T ∩ H(0, w(v))),
/// w(v)_i = c_i where v_i = 1, f_i otherwise (the intersection of the exterior
/// boxes H(0, f - (f_i - c_i) e_i) selected by v). Coordinates with identical
/// (a_i, c_i, f_i) are congruent, so only per-group counts of capped
/// coordinates are enumerated, each weighted by its multiplicity.
inline PieSum displaced_volume_sum(const SimplexSpec& simplex, const HypercuboidSpec& box,
                                   mpfr_prec_t bits, std::size_t guard)
{
    std::vector<DisplacedGroup> groups;
    for (std::size_t i = 0; i < simplex.a.size(); ++i) {
        auto it = std::find_if(groups.begin(), groups.end(), [&](const DisplacedGroup& g) {
            return g.a == simplex.a[i] && g.near == box.near[i] && g.far == box.far[i];
        });
        if (it == groups.end()) {
            groups.push_back({simplex.a[i], box.near[i], box.far[i], 1});
        } else {
            ++it->count;
        }
    }
    double outer = 1.0;
    for (const auto& g : groups) {
        // Coordinates anchored at 0 contribute no exterior box.
        outer *= g.near > 0 ? static_cast<double>(g.count + 1) : 1.0;
    }
    check_guard(outer, guard);

    PieSum out(bits);
    std::vector<std::size_t> capped(groups.size(), 0);
    std::vector<double> edges(simplex.a.size());
    const std::function<void(std::size_t)> recurse = [&](std::size_t level) {
        if (level == groups.size()) {
            std::size_t idx = 0;
            std::size_t total_capped = 0;
            mp_real mult(1.0, bits);
            for (std::size_t r = 0; r < groups.size(); ++r) {
                for (std::size_t j = 0; j < groups[r].count; ++j) {
                    edges[idx++] = j < capped[r] ? groups[r].near : groups[r].far;
                }
                mult *= binomial_mp(mp_real(static_cast<double>(groups[r].count), bits), capped[r]);
                total_capped += capped[r];
            }
            std::vector<double> a_ordered;
            a_ordered.reserve(simplex.a.size());
            for (const auto& g : groups) {
                a_ordered.insert(a_ordered.end(), g.count, g.a);
            }
            PieSum inner = box_volume_sum(a_ordered, simplex.b, edges, bits, guard);
            inner.scale(mult);
            out.absorb(inner, total_capped % 2 == 0 ? 1 : -1);
            return;
        }
        const std::size_t max_cap = groups[level].near > 0 ? groups[level].count : 0;
        for (std::size_t t = 0; t <= max_cap; ++t) {
            capped[level] = t;
            recurse(level + 1);
        }
        capped[level] = 0;
    };
    recurse(0);
    return out;
}

template <class F>
mp_real as_mp(F&& f, std::size_t k, mpfr_prec_t bits)
{
    using R = std::invoke_result_t<F, std::size_t, mpfr_prec_t>;
    if constexpr (std::is_same_v<std::decay_t<R>, mp_real>) {
        return f(k, bits);
    } else {
        return mp_real(static_cast<double>(f(k, bits)), bits);
    }
}

} // namespace detail

/// Vol(T(a,b) ∩ prod_i [0, edges_i]). A zero edge gives 0.
inline double simplex_hypercuboid_volume(const SimplexSpec& simplex, std::span<const double> edges,
                                         const PrecisionPolicy& policy = {},
                                         std::size_t guard = exponential_guard)
{
    simplex.validate();
    require(edges.size() == simplex.dimension(), "simplex/box dimension mismatch");
    for (double e : edges) {
        require(std::isfinite(e) && e >= 0, "box edges must be >= 0");
    }
    if (std::any_of(edges.begin(), edges.end(), [](double e) { return e == 0; })) {
        return 0.0;
    }
    const auto r = evaluate_adaptive(policy, [&](mpfr_prec_t bits) {
        return detail::box_volume_sum(simplex.a, simplex.b, edges, bits, guard);
    });
    return std::max(r.value, 0.0);
}

/// Vol(T(a,b) ∩ H(near, far)) by the displaced-hypercuboid exterior PIE.
inline double displaced_intersection_volume(const SimplexSpec& simplex, const HypercuboidSpec& box,
                                            const PrecisionPolicy& policy = {},
                                            std::size_t guard = exponential_guard)
{
    simplex.validate();
    box.validate();
    require(box.dimension() == simplex.dimension(), "simplex/box dimension mismatch");
    for (std::size_t i = 0; i < box.dimension(); ++i) {
        if (box.far[i] == box.near[i]) {
            return 0.0;
        }
    }
    const auto r = evaluate_adaptive(policy, [&](mpfr_prec_t bits) {
        return detail::displaced_volume_sum(simplex, box, bits, guard);
    });
    return std::max(r.value, 0.0);
}

/// sum_{k=0}^{n_terms-1} (-1)^k count(k) max(base(k), 0)^exponent, evaluated
/// adaptively. `count` and `base` take (k, bits) and return double or mp_real;
/// returning mp_real keeps inputs like 1 - k d/s exact at working precision.
template <class Count, class Base>
AdaptiveResult symmetric_pie_sum(std::size_t n_terms, Count&& count, Base&& base, double exponent,
                                 const PrecisionPolicy& policy = {})
{
    return evaluate_adaptive(policy, [&](mpfr_prec_t bits) {
        PieSum out(bits);
        const mp_real e(exponent, bits);
        for (std::size_t k = 0; k < n_terms; ++k) {
            mp_real c = detail::as_mp(count, k, bits);
            if (c.is_zero()) {
                continue;
            }
            mp_real b = detail::as_mp(base, k, bits);
            out.add(c * pow_clamped(b, e), k % 2 == 0 ? 1 : -1);
        }
        return out;
    });
}

template <class Count, class Base>
double symmetric_pie_volume(std::size_t n_terms, Count&& count, Base&& base, double exponent,
                            const PrecisionPolicy& policy = {})
{
    return symmetric_pie_sum(n_terms, std::forward<Count>(count), std::forward<Base>(base), exponent,
                             policy)
        .value;
}

} // namespace swarmcov
