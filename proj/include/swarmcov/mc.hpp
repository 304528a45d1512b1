#pragma once

// Monte Carlo ground truth: sample configurations, measure every coverage
// property from its definition, and average over trials.

#include "swarmcov/parent.hpp"
#include "swarmcov/rng.hpp"
#include "swarmcov/scenario.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace swarmcov::mc {

struct Configuration {
    std::vector<double> positions;  ///< n entries, nondecreasing
    std::vector<double> slacks;     ///< n+1 entries

    /// Builds slacks from sorted positions with endpoint robots at 0 and s.
    static Configuration from_positions(std::vector<double> positions, double s)
    {
        Configuration c;
        c.positions = std::move(positions);
        c.slacks.resize(c.positions.size() + 1);
        double prev = 0.0;
        for (std::size_t i = 0; i < c.positions.size(); ++i) {
            c.slacks[i] = c.positions[i] - prev;
            prev = c.positions[i];
        }
        c.slacks.back() = s - prev;
        return c;
    }

    /// Positions from slacks (the last slack is implied).
    static Configuration from_slacks(std::vector<double> slacks)
    {
        Configuration c;
        c.slacks = std::move(slacks);
        c.positions.resize(c.slacks.size() - 1);
        double x = 0.0;
        for (std::size_t i = 0; i < c.positions.size(); ++i) {
            x += c.slacks[i];
            c.positions[i] = x;
        }
        return c;
    }

    /// Throws validation_error unless the configuration fits scn.
    void check(const CoverageScenario& scn, bool conflict_free = false) const
    {
        const std::size_t n = scn.robots();
        require(positions.size() == n && slacks.size() == n + 1,
                "configuration size does not match n");
        require(std::is_sorted(positions.begin(), positions.end()),
                "configuration positions must be nondecreasing");
        double total = 0.0;
        const double tol = 1e-9 * scn.s;
        for (double v : slacks) {
            require(v >= -tol, "configuration slacks must be >= 0");
            if (conflict_free) {
                require(v >= scn.D - tol, "conflict-free slacks must be >= D");
            }
            total += v;
        }
        require(std::abs(total - scn.s) <= tol, "configuration slacks must sum to s");
    }
};

struct PropertySample {
    bool mon = false;
    bool con = false;
    bool sen = false;
    std::size_t cmp = 1;
    double slen = 0.0;
    double mean_deg = 0.0;
    std::size_t n_con = 0;  ///< interior slacks <= d
    std::size_t n_sen = 0;  ///< slacks within sensing reach
    std::size_t n_mon = 0;  ///< slacks <= d
};

/// Evaluates the indicator definitions. Ties (slack == d) count as connected.
inline PropertySample measure(const Configuration& config, const CoverageScenario& scn)
{
    const std::size_t n = config.positions.size();
    require(n >= 1 && config.slacks.size() == n + 1, "inconsistent configuration");
    const double d = scn.d;
    PropertySample p;
    for (std::size_t j = 0; j <= n; ++j) {
        const double v = config.slacks[j];
        const bool end = (j == 0 || j == n);
        const bool connected = v <= d;
        p.n_mon += connected;
        if (end) {
            p.n_sen += connected;
            p.slen += std::min(v, d);
        } else {
            p.n_con += connected;
            p.n_sen += v <= 2 * d;
            p.slen += std::min(v, 2 * d);
        }
    }
    p.mon = p.n_mon == n + 1;
    p.con = p.n_con == n - 1;
    p.sen = p.n_sen == n + 1;
    p.cmp = 1 + (n - 1 - p.n_con);

    // Degree among real robots: two pointers over the sorted positions.
    const auto& x = config.positions;
    std::size_t lo = 0;
    std::size_t hi = 0;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        while (x[i] - x[lo] > d) {
            ++lo;
        }
        hi = std::max(hi, i);
        while (hi + 1 < n && x[hi + 1] - x[i] <= d) {
            ++hi;
        }
        total += static_cast<double>(hi - lo);
    }
    p.mean_deg = total / static_cast<double>(n);
    return p;
}

/// n i.i.d. draws from the parent by inverse CDF, sorted.
inline Configuration sample_ct(const CoverageScenario& scn, const ParentDistribution& parent,
                               Xoshiro256ss& rng)
{
    const std::size_t n = scn.robots();
    std::vector<double> x(n);
    for (auto& v : x) {
        v = parent.quantile(rng.uniform01());
    }
    std::sort(x.begin(), x.end());
    return Configuration::from_positions(std::move(x), scn.s);
}

inline Configuration sample_ct(const CoverageScenario& scn, const ParentDistribution& parent,
                               std::uint64_t seed)
{
    Xoshiro256ss rng(seed);
    return sample_ct(scn, parent, rng);
}

/// Uniform on the conflict-free polytope: n+1 exponentials normalized to the
/// free slack s~, each shifted by D.
inline Configuration sample_cf_uniform(const CoverageScenario& scn, Xoshiro256ss& rng)
{
    scn.validate_cf();
    const std::size_t n = scn.robots();
    std::vector<double> e(n + 1);
    double total = 0.0;
    for (auto& v : e) {
        v = rng.exponential();
        total += v;
    }
    const double free = scn.free_slack();
    for (auto& v : e) {
        v = scn.D + free * v / total;
    }
    // Pin the sum so that positions end exactly at s - s_{n+1}.
    Configuration c = Configuration::from_slacks(std::move(e));
    c.slacks.back() = scn.s - (c.positions.empty() ? 0.0 : c.positions.back());
    return c;
}

inline Configuration sample_cf_uniform(const CoverageScenario& scn, std::uint64_t seed)
{
    Xoshiro256ss rng(seed);
    return sample_cf_uniform(scn, rng);
}

/// Reference CF sampler: uniform CT draws rejected while any slack is < D.
inline Configuration sample_cf_rejection(const CoverageScenario& scn, Xoshiro256ss& rng,
                                         std::size_t max_attempts = 100'000'000)
{
    scn.validate_cf();
    const auto parent = ParentDistribution::uniform(scn.s);
    for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
        Configuration c = sample_ct(scn, parent, rng);
        if (std::all_of(c.slacks.begin(), c.slacks.end(), [&](double v) { return v >= scn.D; })) {
            return c;
        }
    }
    throw computation_error("rejection sampler exhausted its attempt budget");
}

enum class Model { ct, cf };

inline std::string_view to_string(Model m) { return m == Model::ct ? "ct" : "cf"; }

struct EstimateOptions {
    std::size_t trials = 100'000;
    std::uint64_t seed = 1;
    unsigned workers = 0;  ///< 0 = hardware concurrency
};

inline constexpr std::size_t chunk_trials = 4096;

struct MonteCarloSummary {
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    std::string generator{Xoshiro256ss::name};
    PropertyEstimate p_mon{0, Method::mc, 0};
    PropertyEstimate p_con{0, Method::mc, 0};
    PropertyEstimate p_sen{0, Method::mc, 0};
    PropertyEstimate expected_cmp{0, Method::mc, 0};
    PropertyEstimate expected_slen{0, Method::mc, 0};  ///< s * P(sen), as the closed forms define it
    PropertyEstimate expected_deg{0, Method::mc, 0};
    PropertyEstimate mean_sensed_length{0, Method::mc, 0};  ///< average of the per-sample slen
    std::vector<double> cmp_pmf;          ///< frequency of cmp = k at index k-1
    std::vector<double> slack_connected;  ///< per-slack frequency of S_j <= d
    std::vector<double> slack_sensed;     ///< per-slack frequency of the sensing test
};

namespace detail {

struct Tally {
    std::size_t trials = 0;
    std::array<double, 6> sum{};
    std::array<double, 6> sum_sq{};
    std::vector<std::size_t> cmp;
    std::vector<std::size_t> connected;
    std::vector<std::size_t> sensed;
};

inline PropertyEstimate finish(double sum, double sum_sq, std::size_t trials)
{
    const double t = static_cast<double>(trials);
    const double mean = sum / t;
    double se = 0.0;
    if (trials > 1) {
        const double var = std::max(0.0, (sum_sq - t * mean * mean) / (t - 1.0));
        se = std::sqrt(var / t);
    }
    return {mean, Method::mc, se};
}

} // namespace detail

/// Averages measure() over trials drawn by `sampler(rng)`. Trials are cut into
/// fixed chunks, each with its own stream keyed by (seed, chunk index), and
/// the chunk tallies are reduced in chunk order, so the result does not depend
/// on the number of workers.
template <class Sampler>
MonteCarloSummary estimate_with(const CoverageScenario& scn, const EstimateOptions& options,
                                Sampler&& sampler)
{
    require(options.trials >= 1, "trials must be >= 1");
    const std::size_t n = scn.robots();
    const std::size_t chunks = (options.trials + chunk_trials - 1) / chunk_trials;
    std::vector<detail::Tally> tallies(chunks);

    unsigned workers = options.workers == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                            : options.workers;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    const auto work = [&] {
        try {
            for (std::size_t c = next++; c < chunks; c = next++) {
                detail::Tally& t = tallies[c];
                t.cmp.assign(n, 0);
                t.connected.assign(n + 1, 0);
                t.sensed.assign(n + 1, 0);
                t.trials = std::min(chunk_trials, options.trials - c * chunk_trials);
                Xoshiro256ss rng(options.seed, c);
                for (std::size_t k = 0; k < t.trials; ++k) {
                    const Configuration cfg = sampler(rng);
                    const PropertySample p = measure(cfg, scn);
                    const std::array<double, 6> v{double(p.mon), double(p.con), double(p.sen),
                                                  double(p.cmp), p.slen, p.mean_deg};
                    for (std::size_t q = 0; q < v.size(); ++q) {
                        t.sum[q] += v[q];
                        t.sum_sq[q] += v[q] * v[q];
                    }
                    ++t.cmp[p.cmp - 1];
                    for (std::size_t j = 0; j <= n; ++j) {
                        const double sl = cfg.slacks[j];
                        const bool end = j == 0 || j == n;
                        t.connected[j] += sl <= scn.d;
                        t.sensed[j] += sl <= (end ? scn.d : 2 * scn.d);
                    }
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next = chunks;
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    detail::Tally total;
    total.cmp.assign(n, 0);
    total.connected.assign(n + 1, 0);
    total.sensed.assign(n + 1, 0);
    for (const auto& t : tallies) {
        total.trials += t.trials;
        for (std::size_t q = 0; q < 6; ++q) {
            total.sum[q] += t.sum[q];
            total.sum_sq[q] += t.sum_sq[q];
        }
        for (std::size_t k = 0; k < n; ++k) {
            total.cmp[k] += t.cmp[k];
        }
        for (std::size_t j = 0; j <= n; ++j) {
            total.connected[j] += t.connected[j];
            total.sensed[j] += t.sensed[j];
        }
    }

    MonteCarloSummary out;
    out.trials = total.trials;
    out.seed = options.seed;
    PropertyEstimate* fields[6] = {&out.p_mon,        &out.p_con,
                                   &out.p_sen,        &out.expected_cmp,
                                   &out.mean_sensed_length, &out.expected_deg};
    for (std::size_t q = 0; q < 6; ++q) {
        *fields[q] = detail::finish(total.sum[q], total.sum_sq[q], total.trials);
    }
    out.expected_slen = {scn.s * out.p_sen.value, Method::mc, scn.s * out.p_sen.std_error};
    const double t = static_cast<double>(total.trials);
    for (std::size_t k = 0; k < n; ++k) {
        out.cmp_pmf.push_back(static_cast<double>(total.cmp[k]) / t);
    }
    for (std::size_t j = 0; j <= n; ++j) {
        out.slack_connected.push_back(static_cast<double>(total.connected[j]) / t);
        out.slack_sensed.push_back(static_cast<double>(total.sensed[j]) / t);
    }
    return out;
}

/// MC estimate under the CT model with the given parent, or the uniform CF
/// model (the parent must then be uniform).
inline MonteCarloSummary estimate(const CoverageScenario& scn, Model model,
                                  const ParentDistribution& parent,
                                  const EstimateOptions& options = {})
{
    scn.validate();
    (void)scn.robots();
    require(std::abs(parent.support() - scn.s) <= 1e-12 * scn.s,
            "parent support must equal the boundary length s");
    if (model == Model::ct) {
        return estimate_with(scn, options,
                             [&](Xoshiro256ss& rng) { return sample_ct(scn, parent, rng); });
    }
    require(parent.is_uniform(), "conflict-free sampling supports the uniform parent only");
    scn.validate_cf();
    return estimate_with(scn, options,
                         [&](Xoshiro256ss& rng) { return sample_cf_uniform(scn, rng); });
}

} // namespace swarmcov::mc
