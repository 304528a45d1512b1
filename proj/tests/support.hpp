#pragma once

// Independent oracles shared by the test files. Nothing here calls into the
// MPFR evaluators: brute-force long double sums, hit counting, and
// straightforward Monte Carlo loops.

#include "swarmcov/swarmcov.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace swarmcov::testing {

inline double rel_diff(double a, double b)
{
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

/// Plain 2^n vertex sum of the box-corner formula in long double. Fine for
/// small n and well-conditioned cases only, which is all it is used for.
inline long double brute_box_volume(const std::vector<double>& a, double b,
                                    const std::vector<double>& e)
{
    const std::size_t n = a.size();
    long double sum = 0;
    for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
        long double base = b;
        int bits = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask >> i & 1ULL) {
                base -= static_cast<long double>(a[i]) * e[i];
                ++bits;
            }
        }
        if (base > 0) {
            sum += (bits % 2 ? -1 : 1) * std::pow(base, static_cast<long double>(n));
        }
    }
    long double norm = 1;
    for (std::size_t i = 0; i < n; ++i) {
        norm *= (i + 1) * static_cast<long double>(a[i]);
    }
    return sum / norm;
}

/// Vol(T(a,b) ∩ [c,f]) by translating to the origin: T(a, b - a.c) ∩ [0, f-c].
inline long double brute_displaced_volume(const std::vector<double>& a, double b,
                                          const std::vector<double>& c,
                                          const std::vector<double>& f)
{
    double shift = b;
    std::vector<double> e(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        shift -= a[i] * c[i];
        e[i] = f[i] - c[i];
    }
    if (shift <= 0) {
        return 0;
    }
    return brute_box_volume(a, shift, e);
}

struct HitCount {
    double value;
    double std_error;
};

/// Uniform hit counting of T(a,b) inside the box [c, f].
inline HitCount hit_count_volume(const std::vector<double>& a, double b,
                                 const std::vector<double>& c, const std::vector<double>& f,
                                 std::size_t samples, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double box = 1.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        box *= f[i] - c[i];
    }
    std::size_t hits = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        double lhs = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            lhs += a[i] * (c[i] + (f[i] - c[i]) * u(rng));
        }
        hits += lhs <= b;
    }
    const double p = static_cast<double>(hits) / samples;
    return {box * p, box * std::sqrt(p * (1 - p) / samples)};
}

/// |x - y| within k standard errors (with a small absolute slack for exact zeros).
inline ::testing::AssertionResult within_sigma(double estimate, double std_error, double truth,
                                               double k = 4.0)
{
    const double band = k * std_error + 1e-12;
    if (std::abs(estimate - truth) <= band) {
        return ::testing::AssertionSuccess();
    }
    return ::testing::AssertionFailure()
           << "estimate " << estimate << " +/- " << std_error << " vs " << truth << " (z = "
           << (estimate - truth) / std_error << ")";
}

/// Binomial standard error of a frequency estimated from `trials` draws.
inline double freq_se(double p, std::size_t trials)
{
    return std::sqrt(std::max(p * (1 - p), 0.0) / static_cast<double>(trials));
}

/// Plain CT simulation written from the definitions, independent of the mc
/// module: sorted uniform draws, slack tests, pair counting. D > 0 keeps only
/// draws whose slacks are all >= D (conflict-free by rejection).
struct BruteFrequencies {
    std::size_t trials = 0;
    double mon = 0, con = 0, sen = 0;
    double cmp = 0, cmp_sq = 0;
    double deg = 0, deg_sq = 0;
    std::vector<double> cmp_pmf;
};

inline BruteFrequencies brute_ct(double s, double d, std::size_t n, std::size_t trials,
                                 std::uint64_t seed, double D = 0.0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, s);
    BruteFrequencies f;
    f.trials = trials;
    f.cmp_pmf.assign(n, 0.0);
    std::vector<double> x(n);
    for (std::size_t t = 0; t < trials;) {
        for (auto& v : x) {
            v = u(rng);
        }
        std::sort(x.begin(), x.end());
        bool fits = x.front() >= D && s - x.back() >= D;
        for (std::size_t i = 1; i < n && fits; ++i) {
            fits = x[i] - x[i - 1] >= D;
        }
        if (!fits) {
            continue;
        }
        ++t;
        bool mon = x.front() <= d && s - x.back() <= d;
        bool sen = mon;
        std::size_t gaps = 0;
        for (std::size_t i = 1; i < n; ++i) {
            const double g = x[i] - x[i - 1];
            if (g > d) {
                ++gaps;
                mon = false;
            }
            if (g > 2 * d) {
                sen = false;
            }
        }
        std::size_t pairs = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n && x[j] - x[i] <= d; ++j) {
                ++pairs;
            }
        }
        const double deg = 2.0 * static_cast<double>(pairs) / static_cast<double>(n);
        f.mon += mon;
        f.con += gaps == 0;
        f.sen += sen;
        f.cmp += static_cast<double>(gaps + 1);
        f.cmp_sq += static_cast<double>((gaps + 1) * (gaps + 1));
        f.deg += deg;
        f.deg_sq += deg * deg;
        f.cmp_pmf[gaps] += 1;
    }
    const auto N = static_cast<double>(trials);
    f.mon /= N;
    f.con /= N;
    f.sen /= N;
    f.cmp /= N;
    f.cmp_sq /= N;
    f.deg /= N;
    f.deg_sq /= N;
    for (auto& p : f.cmp_pmf) {
        p /= N;
    }
    return f;
}

inline double mean_se(double mean, double mean_sq, std::size_t trials)
{
    return std::sqrt(std::max(mean_sq - mean * mean, 0.0) / static_cast<double>(trials));
}

} // namespace swarmcov::testing
