#pragma once

// Parent distributions: the common pdf g / CDF G on [0, s] from which unordered
// robot positions are drawn.

#include "swarmcov/quadrature.hpp"
#include "swarmcov/scenario.hpp"

#include <boost/math/distributions/normal.hpp>

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

namespace swarmcov {

class ParentDistribution {
public:
    using Function = std::function<double(double)>;

    /// Validates cdf(0) = 0, cdf(s) = 1, monotone cdf, pdf >= 0 and that the
    /// pdf integrates to 1 within 1e-6. `quantile` may be empty, in which case
    /// the CDF is inverted numerically.
    ParentDistribution(std::string name, double s, Function pdf, Function cdf,
                       Function quantile = {}, bool uniform = false)
        : name_(std::move(name)), s_(s), pdf_(std::move(pdf)), cdf_(std::move(cdf)),
          quantile_(std::move(quantile)), uniform_(uniform)
    {
        require(s_ > 0, "parent support length must be > 0");
        require(pdf_ && cdf_, "parent needs both pdf and cdf");
        require(std::abs(cdf_(0.0)) <= 1e-9, "parent cdf(0) must be 0");
        require(std::abs(cdf_(s_) - 1.0) <= 1e-9, "parent cdf(s) must be 1");
        constexpr int grid = 256;
        double prev = 0.0;
        for (int j = 0; j <= grid; ++j) {
            const double x = s_ * j / grid;
            const double c = cdf_(x);
            require(c + 1e-12 >= prev, "parent cdf must be nondecreasing");
            require(pdf_(x) >= 0, "parent pdf must be >= 0");
            prev = c;
        }
        const double mass = integrate(pdf_, 0.0, s_, {1e-10, 1e-10, 15});
        require(std::abs(mass - 1.0) <= 1e-6, "parent pdf must integrate to 1 (got "
                                                  + std::to_string(mass) + ")");
    }

    static ParentDistribution uniform(double s)
    {
        return {"uniform", s, [s](double x) { return (x >= 0 && x <= s) ? 1.0 / s : 0.0; },
                [s](double x) { return std::clamp(x / s, 0.0, 1.0); },
                [s](double u) { return u * s; }, true};
    }

    enum class Slope { rising, falling };

    /// Triangular parent with its mode at s (rising, g = 2x/s^2) or at 0
    /// (falling, g = 2(s-x)/s^2).
    static ParentDistribution triangular(double s, Slope slope = Slope::rising)
    {
        if (slope == Slope::rising) {
            return {"triangular:right", s,
                    [s](double x) { return (x >= 0 && x <= s) ? 2.0 * x / (s * s) : 0.0; },
                    [s](double x) {
                        const double u = std::clamp(x / s, 0.0, 1.0);
                        return u * u;
                    },
                    [s](double u) { return s * std::sqrt(u); }};
        }
        return {"triangular:left", s,
                [s](double x) { return (x >= 0 && x <= s) ? 2.0 * (s - x) / (s * s) : 0.0; },
                [s](double x) {
                    const double u = std::clamp(x / s, 0.0, 1.0);
                    return 1.0 - (1.0 - u) * (1.0 - u);
                },
                [s](double u) { return s * (1.0 - std::sqrt(1.0 - u)); }};
    }

    /// Normal(mu, sigma) renormalized to [0, s].
    static ParentDistribution truncated_gaussian(double s, double mu, double sigma)
    {
        require(sigma > 0, "truncated gaussian needs sigma > 0");
        const boost::math::normal_distribution<double> unit;
        const double lo = boost::math::cdf(unit, (0.0 - mu) / sigma);
        const double hi = boost::math::cdf(unit, (s - mu) / sigma);
        const double mass = hi - lo;
        require(mass > 1e-12, "truncated gaussian has no mass on [0, s]");
        return {"truncated-gaussian:" + std::to_string(mu) + "," + std::to_string(sigma), s,
                [=](double x) {
                    if (x < 0 || x > s) {
                        return 0.0;
                    }
                    return boost::math::pdf(unit, (x - mu) / sigma) / (sigma * mass);
                },
                [=](double x) {
                    if (x <= 0) {
                        return 0.0;
                    }
                    if (x >= s) {
                        return 1.0;
                    }
                    return (boost::math::cdf(unit, (x - mu) / sigma) - lo) / mass;
                },
                [=](double u) {
                    const double p = std::clamp(lo + u * mass, lo, hi);
                    if (p <= 0.0 || p >= 1.0) {
                        return u < 0.5 ? 0.0 : s;
                    }
                    return std::clamp(mu + sigma * boost::math::quantile(unit, p), 0.0, s);
                }};
    }

    /// Parses "uniform", "triangular[:right|:left]" or "truncated-gaussian:mu,sigma".
    static ParentDistribution parse(std::string_view text, double s)
    {
        if (text == "uniform") {
            return uniform(s);
        }
        if (text == "triangular" || text == "triangular:right") {
            return triangular(s, Slope::rising);
        }
        if (text == "triangular:left") {
            return triangular(s, Slope::falling);
        }
        constexpr std::string_view gauss = "truncated-gaussian:";
        if (text.substr(0, gauss.size()) == gauss) {
            const std::string args(text.substr(gauss.size()));
            const auto comma = args.find(',');
            require(comma != std::string::npos, "truncated-gaussian needs mu,sigma");
            try {
                return truncated_gaussian(s, std::stod(args.substr(0, comma)),
                                          std::stod(args.substr(comma + 1)));
            } catch (const std::logic_error& e) {
                if (dynamic_cast<const validation_error*>(&e) != nullptr) {
                    throw;
                }
                throw validation_error("truncated-gaussian: cannot parse mu,sigma from '" + args
                                       + "'");
            }
        }
        throw validation_error("unknown parent '" + std::string(text)
                               + "' (expected uniform, triangular, truncated-gaussian:mu,sigma)");
    }

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] double support() const { return s_; }
    [[nodiscard]] bool is_uniform() const { return uniform_; }
    [[nodiscard]] double pdf(double x) const { return pdf_(x); }
    [[nodiscard]] double cdf(double x) const { return cdf_(x); }

    /// Inverse CDF. Falls back to bisection on the CDF, which must bracket u
    /// to 1e-12 of the support.
    [[nodiscard]] double quantile(double u) const
    {
        if (quantile_) {
            return quantile_(u);
        }
        double lo = 0.0;
        double hi = s_;
        for (int iter = 0; iter < 200 && hi - lo > 1e-12 * s_; ++iter) {
            const double mid = 0.5 * (lo + hi);
            (cdf_(mid) < u ? lo : hi) = mid;
        }
        if (hi - lo > 1e-12 * s_) {
            throw computation_error("parent cdf not invertible to tolerance");
        }
        return 0.5 * (lo + hi);
    }

private:
    std::string name_;
    double s_;
    Function pdf_;
    Function cdf_;
    Function quantile_;
    bool uniform_ = false;
};

} // namespace swarmcov
