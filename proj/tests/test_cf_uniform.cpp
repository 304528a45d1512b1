#include "support.hpp"

using namespace swarmcov;
using swarmcov::testing::freq_se;
using swarmcov::testing::rel_diff;
using swarmcov::testing::within_sigma;

namespace {

CoverageScenario sc(double s, double d, double D, double n) { return {s, d, D, n}; }

bool close(double a, double b, double rel = 1e-9)
{
    return a == b || rel_diff(a, b) <= rel || std::abs(a - b) <= 1e-15;
}

} // namespace

TEST(FreeSlack, View)
{
    const auto v = cf::free_slack_view(sc(200, 5, 1, 99));
    EXPECT_DOUBLE_EQ(v.s_tilde, 100.0);
    EXPECT_DOUBLE_EQ(v.d_tilde, 4.0);
    const auto w = cf::free_slack_view(sc(200, 5, 0, 17));
    EXPECT_DOUBLE_EQ(w.s_tilde, 200.0);
    EXPECT_DOUBLE_EQ(w.d_tilde, 5.0);
    const auto x = cf::free_slack_view(sc(200, 5, 1, 120.74));
    EXPECT_NEAR(x.s_tilde, 78.26, 1e-9);
    EXPECT_DOUBLE_EQ(x.d_tilde, 4.0);
}

TEST(FreeSlack, RejectsOvercrowding)
{
    EXPECT_THROW(cf::free_slack_view(sc(10, 2, 1, 9)), validation_error);
    EXPECT_THROW(cf::free_slack_view(sc(10, 2, 2, 3)), validation_error);
}

TEST(Fsa, DesignScenarios)
{
    EXPECT_NEAR(cf::fsa_property(sc(200, 5, 1, 120.74), cf::Property::p_mon).value, 0.80, 5e-3);
    EXPECT_NEAR(cf::fsa_property(sc(200, 5, 1, 77.93), cf::Property::expected_deg).value, 5.0, 1e-3);
}

TEST(Fsa, TagsMethod)
{
    EXPECT_EQ(cf::fsa_property(sc(20, 4, 0.5, 5), cf::Property::p_con).method, Method::fsa);
}

TEST(CfCollapse, ZeroDiameterMatchesConflictTolerant)
{
    for (double d : {1.0, 2.0, 3.0, 5.0}) {
        for (std::size_t n = 1; n <= 8; ++n) {
            const auto scn = sc(10, d, 0, static_cast<double>(n));
            EXPECT_TRUE(close(cf::p_mon_exact(scn), ct::p_mon(scn))) << d << " " << n;
            EXPECT_TRUE(close(cf::p_con_exact(scn), ct::p_con(scn))) << d << " " << n;
            EXPECT_TRUE(close(cf::p_sen_exact(scn), ct::p_sen(scn))) << d << " " << n;
            EXPECT_TRUE(close(cf::expected_cmp_exact(scn), ct::expected_cmp(scn))) << d << " " << n;
            EXPECT_TRUE(close(cf::expected_slen_exact(scn), ct::expected_slen(scn))) << d << " " << n;
            for (std::size_t k = 1; k <= n; ++k) {
                EXPECT_TRUE(close(cf::cmp_pmf_exact(scn, k), ct::cmp_pmf(scn, k)))
                    << d << " " << n << " k=" << k;
            }
            using P = cf::Property;
            EXPECT_TRUE(close(cf::fsa_property(scn, P::p_mon).value, ct::p_mon(scn)));
            EXPECT_TRUE(close(cf::fsa_property(scn, P::p_con).value, ct::p_con(scn)));
            EXPECT_TRUE(close(cf::fsa_property(scn, P::p_sen).value, ct::p_sen(scn)));
            EXPECT_TRUE(close(cf::fsa_property(scn, P::expected_cmp).value, ct::expected_cmp(scn)));
            EXPECT_TRUE(close(cf::fsa_property(scn, P::expected_slen).value, ct::expected_slen(scn)));
            EXPECT_TRUE(close(cf::fsa_property(scn, P::expected_deg).value, ct::expected_deg(scn)));
        }
    }
}

TEST(CfExact, SingleRobotConnected)
{
    EXPECT_NEAR(cf::p_con_exact(sc(6, 2, 0.5, 1)), 1.0, 1e-12);
    EXPECT_NEAR(cf::p_con_exact(sc(6, 2, 2, 1)), 1.0, 1e-12);
}

TEST(CfExact, FullFreeRangeIsCertain)
{
    // d~ >= s~: every free slack fits.
    EXPECT_NEAR(cf::p_sen_exact(sc(10, 4, 2, 3)), 1.0, 1e-12);
    EXPECT_NEAR(cf::p_mon_exact(sc(10, 4, 2, 3)), 1.0, 1e-12);
}

TEST(CfExact, SmallDiameterLimit)
{
    EXPECT_NEAR(cf::p_mon_exact(sc(5, 5, 1e-6, 4)), 1.0, 1e-5);
}

TEST(CfExact, SingleRobotByIntegration)
{
    // n = 1 conflict-free: X uniform on [D, s-D]; monitored when X <= d and s - X <= d.
    const double s = 6, d = 3.5, D = 0.5;
    const double lo = std::max(D, s - d);
    const double hi = std::min(s - D, d);
    EXPECT_NEAR(cf::p_mon_exact(sc(s, d, D, 1)), (hi - lo) / (s - 2 * D), 1e-12);
}

TEST(CfExact, ComponentPmf)
{
    for (double D : {0.25, 0.5, 1.0}) {
        for (std::size_t n = 1; n <= 6; ++n) {
            const auto scn = sc(12, 2.5, D, static_cast<double>(n));
            double total = 0, mean = 0;
            for (std::size_t k = 1; k <= n; ++k) {
                const double p = cf::cmp_pmf_exact(scn, k);
                EXPECT_GE(p, 0.0);
                total += p;
                mean += static_cast<double>(k) * p;
            }
            EXPECT_NEAR(total, 1.0, 1e-9) << D << " " << n;
            EXPECT_NEAR(mean, cf::expected_cmp_exact(scn), 1e-9) << D << " " << n;
            EXPECT_NEAR(cf::cmp_pmf_exact(scn, 1), cf::p_con_exact(scn), 1e-12);
        }
    }
}

TEST(CfExact, OrderingAndBounds)
{
    for (double D : {0.2, 0.6}) {
        for (double d : {1.0, 2.0, 3.5}) {
            for (std::size_t n = 1; n <= 6; ++n) {
                const auto scn = sc(9, d, D, static_cast<double>(n));
                const double mon = cf::p_mon_exact(scn);
                const double con = cf::p_con_exact(scn);
                const double sen = cf::p_sen_exact(scn);
                for (double p : {mon, con, sen}) {
                    EXPECT_GE(p, 0.0);
                    EXPECT_LE(p, 1.0);
                }
                EXPECT_LE(mon, std::min(con, sen) + 1e-12) << D << " " << d << " " << n;
            }
        }
    }
}

TEST(CfExact, MonotoneInRange)
{
    double mon = 0, con = 0, sen = 0;
    for (double d = 0.75; d <= 6.0; d += 0.25) {
        const auto scn = sc(8, d, 0.5, 4);
        EXPECT_GE(cf::p_mon_exact(scn), mon - 1e-12);
        EXPECT_GE(cf::p_con_exact(scn), con - 1e-12);
        EXPECT_GE(cf::p_sen_exact(scn), sen - 1e-12);
        mon = cf::p_mon_exact(scn);
        con = cf::p_con_exact(scn);
        sen = cf::p_sen_exact(scn);
    }
}

TEST(CfExact, FreeSlackRouteForSlackOnlyEvents)
{
    // Monitoring, connectivity and components only compare free slacks with
    // d~, and free slacks are uniform on the s~ simplex, so the substituted
    // CT forms give the same numbers by a different computation.
    for (std::size_t n = 1; n <= 6; ++n) {
        const auto scn = sc(11, 2.2, 0.4, static_cast<double>(n));
        using P = cf::Property;
        EXPECT_TRUE(close(cf::p_mon_exact(scn), cf::fsa_property(scn, P::p_mon).value, 1e-9)) << n;
        EXPECT_TRUE(close(cf::p_con_exact(scn), cf::fsa_property(scn, P::p_con).value, 1e-9)) << n;
        EXPECT_TRUE(close(cf::expected_cmp_exact(scn),
                          cf::fsa_property(scn, P::expected_cmp).value, 1e-9))
            << n;
    }
}

TEST(CfExact, AgreesWithRejectionSimulation)
{
    constexpr std::size_t trials = 1'000'000;
    const auto scn = sc(6, 2, 0.5, 3);
    const auto f = swarmcov::testing::brute_ct(6, 2, 3, trials, 77, 0.5);
    const double mon = cf::p_mon_exact(scn);
    const double con = cf::p_con_exact(scn);
    const double sen = cf::p_sen_exact(scn);
    EXPECT_TRUE(within_sigma(f.mon, freq_se(mon, trials), mon));
    EXPECT_TRUE(within_sigma(f.con, freq_se(con, trials), con));
    EXPECT_TRUE(within_sigma(f.sen, freq_se(sen, trials), sen));
    EXPECT_TRUE(within_sigma(f.cmp, swarmcov::testing::mean_se(f.cmp, f.cmp_sq, trials),
                             cf::expected_cmp_exact(scn)));
    for (std::size_t k = 1; k <= 3; ++k) {
        const double p = cf::cmp_pmf_exact(scn, k);
        EXPECT_TRUE(within_sigma(f.cmp_pmf[k - 1], std::max(freq_se(p, trials), 1e-9), p)) << k;
    }
}

TEST(CfExact, AgreesWithRejectionSimulationWiderGrid)
{
    constexpr std::size_t trials = 400'000;
    for (std::size_t n : {2u, 4u, 6u}) {
        const auto scn = sc(10, 2, 0.3, static_cast<double>(n));
        const auto f = swarmcov::testing::brute_ct(10, 2, n, trials, 5 + n, 0.3);
        const double mon = cf::p_mon_exact(scn);
        const double con = cf::p_con_exact(scn);
        const double sen = cf::p_sen_exact(scn);
        EXPECT_TRUE(within_sigma(f.mon, std::max(freq_se(mon, trials), 1e-9), mon)) << n;
        EXPECT_TRUE(within_sigma(f.con, std::max(freq_se(con, trials), 1e-9), con)) << n;
        EXPECT_TRUE(within_sigma(f.sen, std::max(freq_se(sen, trials), 1e-9), sen)) << n;
    }
}

TEST(Fsa, CloseToExactForSmallDiameter)
{
    for (int n = 2; n <= 8; ++n) {
        const auto scn = sc(20, 4, 0.5, n);
        using P = cf::Property;
        EXPECT_LT(std::abs(cf::fsa_property(scn, P::p_mon).value - cf::p_mon_exact(scn)), 0.05) << n;
        EXPECT_LT(std::abs(cf::fsa_property(scn, P::p_con).value - cf::p_con_exact(scn)), 0.05) << n;
        EXPECT_LT(std::abs(cf::fsa_property(scn, P::p_sen).value - cf::p_sen_exact(scn)), 0.05) << n;
    }
}

TEST(CfExact, RejectsRealSwarmSize)
{
    EXPECT_THROW(cf::p_mon_exact(sc(10, 2, 0.5, 3.5)), validation_error);
}
