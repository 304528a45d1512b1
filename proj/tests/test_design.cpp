#include "support.hpp"

using namespace swarmcov;
using namespace swarmcov::design;

namespace {

const Geometry design_geometry{200, 5, 1};

// Plain bisection on the forward curve between lo and hi.
double bisect(const Geometry& g, Property p, Mode m, double target, double lo, double hi)
{
    const double flo = evaluate(g, p, m, lo) - target;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double f = evaluate(g, p, m, mid) - target;
        if ((f < 0) == (flo < 0)) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace

TEST(DesignGuess, MonitoringTarget)
{
    const auto g = initial_guess({200, 5, 0}, {Property::p_mon, 0.80, Mode::ct});
    ASSERT_EQ(g.size(), 1u);
    EXPECT_NEAR(g[0], 162.00, 0.01);
}

TEST(DesignGuess, DegreeIsLinear)
{
    const auto g = initial_guess({200, 5, 0}, {Property::expected_deg, 5.0, Mode::ct});
    EXPECT_NEAR(g[0], 102.26, 0.01);
    EXPECT_NEAR(evaluate({200, 5, 0}, Property::expected_deg, Mode::ct, g[0]), 5.0, 1e-9);
}

TEST(DesignGuess, ComponentsStartLowAtOne)
{
    const auto g = initial_guess({200, 5, 0}, {Property::expected_cmp, 4.0, Mode::ct});
    ASSERT_EQ(g.size(), 2u);
    EXPECT_EQ(g[0], 1.0);
    EXPECT_GT(g[1], g[0]);
}

TEST(DesignGuess, ConflictFreeGuessesStayAdmissible)
{
    for (auto p : {Property::p_mon, Property::p_con, Property::expected_slen, Property::expected_deg}) {
        const double target = p == Property::expected_slen ? 120.0 : (p == Property::expected_deg ? 5.0 : 0.8);
        for (double v : initial_guess(design_geometry, {p, target, Mode::cf_fsa})) {
            EXPECT_GE(v, 1.0);
            EXPECT_LT(v, 200.0 / 1.0 - 1.0);
        }
    }
}

TEST(DesignSolve, MonitoringRoots)
{
    EXPECT_NEAR(solve_n(design_geometry, {Property::p_mon, 0.80, Mode::ct}).roots.at(0), 283.15, 0.02);
    EXPECT_NEAR(solve_n(design_geometry, {Property::p_mon, 0.80, Mode::cf_fsa}).roots.at(0), 120.74, 0.02);
}

TEST(DesignSolve, ConnectivityRoots)
{
    EXPECT_NEAR(solve_n(design_geometry, {Property::p_con, 0.70, Mode::ct}).roots.at(0), 261.58, 0.02);
    EXPECT_NEAR(solve_n(design_geometry, {Property::p_con, 0.70, Mode::cf_fsa}).roots.at(0), 116.84, 0.02);
}

TEST(DesignSolve, DegreeRoots)
{
    EXPECT_NEAR(solve_n(design_geometry, {Property::expected_deg, 5.0, Mode::ct}).roots.at(0), 102.26, 0.02);
    EXPECT_NEAR(solve_n(design_geometry, {Property::expected_deg, 5.0, Mode::cf_fsa}).roots.at(0), 77.93,
                0.02);
}

TEST(DesignSolve, ComponentRootsConflictTolerant)
{
    const auto sol = solve_n(design_geometry, {Property::expected_cmp, 4.0, Mode::ct});
    ASSERT_EQ(sol.roots.size(), 2u);
    EXPECT_NEAR(sol.roots[0], 4.34, 0.02);
    EXPECT_NEAR(sol.roots[1], 155.74, 0.02);
    ASSERT_TRUE(sol.maximum.has_value());
    EXPECT_LT(sol.roots[0], sol.maximum->first);
    EXPECT_GT(sol.roots[1], sol.maximum->first);
}

TEST(DesignSolve, ComponentRootsConflictFree)
{
    const auto sol = solve_n(design_geometry, {Property::expected_cmp, 4.0, Mode::cf_fsa});
    ASSERT_EQ(sol.roots.size(), 2u);
    EXPECT_NEAR(sol.roots[0], 4.27, 0.02);
    // High root by bisection on the same curve, independent of the solver.
    const auto [argmax, max] = cmp_maximum(design_geometry, Mode::cf_fsa);
    EXPECT_GT(max, 4.0);
    EXPECT_NEAR(sol.roots[1],
                bisect(design_geometry, Property::expected_cmp, Mode::cf_fsa, 4.0, argmax, 198.0), 1e-4);
}

TEST(DesignSolve, SensedLengthMatchesBisection)
{
    for (auto m : {Mode::ct, Mode::cf_fsa}) {
        const auto sol = solve_n(design_geometry, {Property::expected_slen, 120.0, m});
        const double hi = m == Mode::ct ? 1000.0 : 198.0;
        EXPECT_NEAR(sol.roots.at(0), bisect(design_geometry, Property::expected_slen, m, 120.0, 1.0, hi), 1e-4);
        EXPECT_NEAR(evaluate(design_geometry, Property::expected_slen, m, sol.roots[0]), 120.0, 1e-6);
    }
}

TEST(DesignSolve, RoundTrip)
{
    const std::pair<Property, double> targets[] = {{Property::p_mon, 0.5}, {Property::p_con, 0.9},
                                                   {Property::expected_slen, 150.0},
                                                   {Property::expected_deg, 2.5},
                                                   {Property::expected_cmp, 7.0}};
    for (auto m : {Mode::ct, Mode::cf_fsa}) {
        for (const auto& [p, v] : targets) {
            const auto sol = solve_n(design_geometry, {p, v, m});
            for (double r : sol.roots) {
                EXPECT_NEAR(evaluate(design_geometry, p, m, r), v, 1e-6) << to_string(p);
            }
            EXPECT_LE(sol.residual, 1e-6);
        }
    }
}

TEST(DesignSolve, ConflictFreeNeedsFewerRobots)
{
    for (auto p : {Property::p_mon, Property::p_con, Property::expected_deg}) {
        const double v = p == Property::expected_deg ? 5.0 : 0.75;
        EXPECT_LT(solve_n(design_geometry, {p, v, Mode::cf_fsa}).roots[0],
                  solve_n(design_geometry, {p, v, Mode::ct}).roots[0])
            << to_string(p);
    }
}

TEST(DesignMaximum, ComponentCurvePeak)
{
    const auto [argmax, max] = cmp_maximum({200, 5, 0}, Mode::ct);
    EXPECT_NEAR(max, 15.17, 0.01);
    EXPECT_NEAR(argmax, 40.50, 0.01);
    // A local check: neighbours are lower.
    for (double dn : {-0.5, 0.5}) {
        EXPECT_LT(evaluate({200, 5, 0}, Property::expected_cmp, Mode::ct, argmax + dn), max);
    }
}

TEST(DesignMaximum, InfeasibleTargetReportsPeak)
{
    try {
        solve_n({200, 5, 0}, {Property::expected_cmp, 20.0, Mode::ct});
        FAIL() << "expected infeasible_design";
    } catch (const infeasible_design& e) {
        EXPECT_NEAR(e.max_value(), 15.17, 0.01);
        EXPECT_NEAR(e.argmax(), 40.50, 0.01);
    }
}

TEST(DesignValidation, RejectsBadTargets)
{
    EXPECT_THROW(solve_n(design_geometry, {Property::p_mon, 1.2, Mode::ct}), validation_error);
    EXPECT_THROW(solve_n(design_geometry, {Property::expected_slen, 250, Mode::ct}), validation_error);
    EXPECT_THROW(solve_n(design_geometry, {Property::expected_cmp, 0.5, Mode::ct}), validation_error);
    EXPECT_THROW(solve_n({10, 1, 1}, {Property::p_mon, 0.5, Mode::cf_fsa}), validation_error);
    EXPECT_THROW(parse_property("p_foo"), validation_error);
    EXPECT_EQ(parse_property("expected_cmp"), Property::expected_cmp);
    EXPECT_EQ(parse_property("E_cmp"), Property::expected_cmp);
}

TEST(DesignValidation, UnreachableProbability)
{
    // p_mon -> 1 only as n -> infinity; a target just under 1 still solves.
    const auto sol = solve_n({20, 5, 0}, {Property::p_mon, 0.999, Mode::ct});
    EXPECT_NEAR(evaluate({20, 5, 0}, Property::p_mon, Mode::ct, sol.roots[0]), 0.999, 1e-6);
}
