#pragma once

// Swarm-size design: find n such that a coverage property hits a target.
// Conflict-free designs always go through the free slack approximation, which
// stays continuous in n because s~ = s - (n+1)D moves with n.

#include "swarmcov/asymptotics.hpp"
#include "swarmcov/cf_uniform.hpp"
#include "swarmcov/ct_uniform.hpp"
#include "swarmcov/scenario.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace swarmcov::design {

enum class Property { p_mon, p_con, expected_cmp, expected_slen, expected_deg };
enum class Mode { ct, cf_fsa };

inline std::string_view to_string(Property p)
{
    switch (p) {
    case Property::p_mon: return "p_mon";
    case Property::p_con: return "p_con";
    case Property::expected_cmp: return "E_cmp";
    case Property::expected_slen: return "E_slen";
    case Property::expected_deg: return "E_deg";
    }
    return "?";
}

inline std::string_view to_string(Mode m) { return m == Mode::ct ? "ct" : "cf_fsa"; }

inline Property parse_property(std::string_view name)
{
    if (name == "p_mon") return Property::p_mon;
    if (name == "p_con") return Property::p_con;
    if (name == "expected_cmp" || name == "E_cmp") return Property::expected_cmp;
    if (name == "expected_slen" || name == "E_slen") return Property::expected_slen;
    if (name == "expected_deg" || name == "E_deg") return Property::expected_deg;
    throw validation_error("unknown design property '" + std::string(name)
                           + "' (expected p_mon, p_con, expected_cmp, expected_slen, expected_deg)");
}

struct Geometry {
    double s = 1.0;
    double d = 1.0;
    double D = 0.0;  ///< used only in cf_fsa mode
};

struct DesignTarget {
    Property property = Property::p_mon;
    double value = 0.5;
    Mode mode = Mode::ct;
};

struct Tolerance {
    double value = 1e-6;  ///< |f(n) - target|
    double n = 1e-4;
};

struct DesignSolution {
    std::vector<double> roots;  ///< ascending
    std::vector<double> residuals;
    double residual = 0.0;      ///< largest |f(root) - target|
    std::vector<double> initial_guesses;
    std::optional<std::pair<double, double>> maximum;  ///< (argmax, max) for E_cmp
};

/// Target above what the property can reach. For E_cmp carries the curve maximum.
class infeasible_design : public std::runtime_error {
public:
    infeasible_design(const std::string& what, double max_value, double argmax)
        : std::runtime_error(what), max_value_(max_value), argmax_(argmax)
    {
    }
    [[nodiscard]] double max_value() const { return max_value_; }
    [[nodiscard]] double argmax() const { return argmax_; }

private:
    double max_value_;
    double argmax_;
};

namespace detail {

inline constexpr double n_floor = 1.0;

/// Largest admissible n: CF needs (n+1)D < s. D = 0 or CT mode is unbounded.
inline double upper_limit(const Geometry& g, Mode mode)
{
    if (mode == Mode::ct || g.D == 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return (g.s / g.D - 1.0) * (1.0 - 1e-12);
}

inline void validate(const Geometry& g, const DesignTarget& t)
{
    CoverageScenario{g.s, g.d, t.mode == Mode::ct ? 0.0 : g.D, 1.0}.validate();
    if (t.mode == Mode::cf_fsa) {
        require(g.d > g.D, "cf_fsa design needs d > D");
        require(upper_limit(g, t.mode) > n_floor, "cf_fsa design needs 2D < s");
    }
    switch (t.property) {
    case Property::p_mon:
    case Property::p_con:
        require(t.value > 0 && t.value < 1, "probability target must lie in (0, 1)");
        break;
    case Property::expected_slen:
        require(t.value > 0 && t.value < g.s, "expected_slen target must lie in (0, s)");
        break;
    case Property::expected_cmp:
        require(t.value > 1, "expected_cmp target must be > 1");
        break;
    case Property::expected_deg:
        require(t.value > 0, "expected_deg target must be > 0");
        break;
    }
}

} // namespace detail

/// Forward evaluation of the design property at real n.
inline double evaluate(const Geometry& g, Property p, Mode mode, double n)
{
    CoverageScenario scn{g.s, g.d, mode == Mode::ct ? 0.0 : g.D, n};
    if (mode == Mode::cf_fsa) {
        scn = cf::substituted(scn);
    }
    switch (p) {
    case Property::p_mon: return ct::p_mon(scn);
    case Property::p_con: return ct::p_con(scn);
    case Property::expected_cmp: return ct::expected_cmp(scn);
    // Sensed length is measured on the full boundary s.
    case Property::expected_slen: return g.s * ct::p_sen(scn);
    case Property::expected_deg: return ct::expected_deg(scn);
    }
    return 0.0;
}

/// Starting points for the root search. One entry, or two (low, high) for E_cmp.
inline std::vector<double> initial_guess(const Geometry& g, const DesignTarget& t)
{
    detail::validate(g, t);
    const auto guess_from_fraction = [&](double fraction) {
        const double ratio = g.d / (g.s * fraction);
        if (ratio < 1.0 / std::numbers::e) {
            return asymptotics::monitoring_guess_n(g.s * fraction, g.d);
        }
        return std::max(detail::n_floor, g.s / g.d);
    };
    double guess = 0.0;
    switch (t.property) {
    case Property::p_mon:
    case Property::p_con: guess = guess_from_fraction(t.value); break;
    case Property::expected_slen: guess = guess_from_fraction(t.value / g.s); break;
    case Property::expected_cmp: guess = guess_from_fraction(1.0); break;
    case Property::expected_deg:
        guess = 1.0 + t.value * g.s * g.s / (2.0 * g.d * g.s - g.d * g.d);
        break;
    }
    const double top = detail::upper_limit(g, t.mode);
    const auto clamp = [&](double n) {
        return std::isfinite(top) ? std::clamp(n, detail::n_floor, 0.5 * (detail::n_floor + top))
                                  : std::max(n, detail::n_floor);
    };
    if (t.property == Property::expected_cmp) {
        return {detail::n_floor, clamp(guess)};
    }
    return {clamp(guess)};
}

namespace detail {

inline double refine(const auto& f, double lo, double hi, const Tolerance& tol)
{
    std::uintmax_t iterations = 200;
    const auto stop = [&](double a, double b) { return std::abs(b - a) <= std::min(tol.n, 1e-10 * std::max(1.0, std::abs(a))); };
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, stop, iterations);
    double n = 0.5 * (r.first + r.second);
    // Pick the bracket end with the smaller residual if the midpoint is worse.
    for (double c : {r.first, r.second}) {
        if (std::abs(f(c)) < std::abs(f(n))) {
            n = c;
        }
    }
    return n;
}

/// From `start`, walks outward (doubling up, halving down toward the floor)
/// until f changes sign, then returns the bracket.
inline std::pair<double, double> bracket(const auto& f, double start, double floor, double top)
{
    double a = start;
    double fa = f(a);
    if (fa == 0.0) {
        return {a, a};
    }
    const bool go_up = fa < 0;
    for (int iter = 0; iter < 200; ++iter) {
        double b;
        if (go_up) {
            b = std::isfinite(top) ? a + 0.5 * (top - a) : std::max(2.0 * a, a + 1.0);
            if (std::isfinite(top) && top - a < 1e-9) {
                break;
            }
        } else {
            b = floor + 0.5 * (a - floor);
            if (a - floor < 1e-12) {
                b = floor;
            }
        }
        const double fb = f(b);
        if ((fb >= 0) == go_up || fb == 0.0) {
            return go_up ? std::pair{a, b} : std::pair{b, a};
        }
        if (b == floor) {
            break;
        }
        a = b;
        if (!std::isfinite(top) && a > 1e12) {
            break;
        }
    }
    throw infeasible_design("could not bracket the target within the admissible n range",
                            std::numeric_limits<double>::quiet_NaN(),
                            std::numeric_limits<double>::quiet_NaN());
}

} // namespace detail

/// Interior maximum (argmax, max) of E_cmp(n): coarse scan then Brent's
/// golden-section/parabolic refinement.
inline std::pair<double, double> cmp_maximum(const Geometry& g, Mode mode)
{
    const double top = detail::upper_limit(g, mode);
    const double end = std::isfinite(top) ? top : std::max(50.0, 40.0 * g.s / g.d);
    const auto f = [&](double n) { return evaluate(g, Property::expected_cmp, mode, n); };
    constexpr int grid = 4000;
    double best_n = detail::n_floor;
    double best = f(best_n);
    const double step = (end - detail::n_floor) / grid;
    for (int j = 1; j <= grid; ++j) {
        const double n = detail::n_floor + step * j;
        const double v = f(n);
        if (v > best) {
            best = v;
            best_n = n;
        }
    }
    const double lo = std::max(detail::n_floor, best_n - step);
    const double hi = std::min(end, best_n + step);
    const auto r = boost::math::tools::brent_find_minima([&](double n) { return -f(n); }, lo, hi,
                                                         52);
    return {r.first, -r.second};
}

/// Solves property(n) = target. Monotone properties return one root; E_cmp
/// returns the roots on both sides of its maximum.
inline DesignSolution solve_n(const Geometry& g, const DesignTarget& t, const Tolerance& tol = {})
{
    detail::validate(g, t);
    require(tol.value > 0 && tol.n > 0, "design tolerances must be > 0");
    const double top = detail::upper_limit(g, t.mode);
    const auto f = [&](double n) { return evaluate(g, t.property, t.mode, n) - t.value; };

    DesignSolution out;
    out.initial_guesses = initial_guess(g, t);
    if (t.property == Property::expected_cmp) {
        const auto [argmax, max] = cmp_maximum(g, t.mode);
        out.maximum = {argmax, max};
        if (!(max > t.value)) {
            throw infeasible_design("expected_cmp target " + std::to_string(t.value)
                                        + " exceeds the curve maximum " + std::to_string(max)
                                        + " at n = " + std::to_string(argmax),
                                    max, argmax);
        }
        // Low root: E_cmp rises from 1 at n = 1 to the maximum.
        out.roots.push_back(detail::refine(f, detail::n_floor, argmax, tol));
        double hi = argmax;
        if (std::isfinite(top)) {
            hi = top;
        } else {
            hi = std::max(2.0 * argmax, out.initial_guesses.back());
            while (f(hi) > 0) {
                hi *= 2.0;
                if (hi > 1e12) {
                    throw infeasible_design("could not bracket the high expected_cmp root", max,
                                            argmax);
                }
            }
        }
        out.roots.push_back(detail::refine(f, argmax, hi, tol));
    } else {
        const auto [lo, hi] = detail::bracket(f, out.initial_guesses.front(), detail::n_floor, top);
        out.roots.push_back(lo == hi ? lo : detail::refine(f, lo, hi, tol));
    }
    std::sort(out.roots.begin(), out.roots.end());
    for (double r : out.roots) {
        const double res = std::abs(f(r));
        out.residuals.push_back(res);
        out.residual = std::max(out.residual, res);
    }
    if (out.residual > tol.value) {
        throw computation_error("design root residual " + std::to_string(out.residual)
                                + " exceeds tolerance " + std::to_string(tol.value));
    }
    return out;
}

} // namespace swarmcov::design
