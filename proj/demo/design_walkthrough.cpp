// Sizes a swarm for a 200 m boundary patrolled by robots with a 5 m range,
// then checks the chosen size by simulation.

#include "swarmcov/swarmcov.hpp"

#include <cmath>
#include <cstdio>

int main()
{
    using namespace swarmcov;
    const design::Geometry g{200.0, 5.0, 1.0};

    // How many robots to monitor the whole boundary 80% of the time?
    const auto ct = design::solve_n(g, {design::Property::p_mon, 0.80, design::Mode::ct});
    const auto cf = design::solve_n(g, {design::Property::p_mon, 0.80, design::Mode::cf_fsa});
    std::printf("p_mon = 0.80: %.2f robots (overlap allowed), %.2f robots of width 1 m\n",
                ct.roots.front(), cf.roots.front());

    const CoverageScenario scn{g.s, g.d, 0.0, std::ceil(ct.roots.front())};
    const auto mc = mc::estimate(scn, mc::Model::ct, ParentDistribution::uniform(g.s),
                                 {200'000, 2024, 0});
    std::printf("n = %.0f: closed form %.4f, simulation %.4f +/- %.4f\n", scn.n, ct::p_mon(scn),
                mc.p_mon.value, mc.p_mon.std_error);

    // E(cmp) rises then falls with n, so a component target has two answers.
    const auto cmp = design::solve_n(g, {design::Property::expected_cmp, 4.0, design::Mode::ct});
    std::printf("E(cmp) = 4 at n = %.2f and n = %.2f (peak %.2f at n = %.2f)\n", cmp.roots[0],
                cmp.roots[1], cmp.maximum->second, cmp.maximum->first);
}
