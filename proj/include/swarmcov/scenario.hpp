#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace swarmcov {

/// Raised when an input violates a documented invariant. The message names it.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation cannot finish inside its configured budget
/// (precision, subdivision depth, exponential-size guard).
class computation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw validation_error(what);
    }
}

enum class Method { exact, fsa, poisson, mc };

inline std::string_view to_string(Method m)
{
    switch (m) {
    case Method::exact: return "exact";
    case Method::fsa: return "fsa";
    case Method::poisson: return "poisson";
    case Method::mc: return "mc";
    }
    return "?";
}

struct PropertyEstimate {
    double value = 0.0;
    Method method = Method::exact;
    double std_error = 0.0;
};

/// One coverage problem: a boundary of length s, range d, robot diameter D and
/// swarm size n. n may be non-integer for the closed forms; sampling and the
/// exact conflict-free routines require an integer.
struct CoverageScenario {
    double s = 1.0;
    double d = 1.0;
    double D = 0.0;
    double n = 1.0;

    /// Minimum number of robots that can monitor the boundary, floor(s/d).
    [[nodiscard]] std::size_t n_min() const
    {
        return static_cast<std::size_t>(std::floor(s / d));
    }

    [[nodiscard]] bool integer_n() const { return n >= 0 && std::floor(n) == n; }

    [[nodiscard]] std::size_t robots() const
    {
        require(integer_n(), "n must be a nonnegative integer, got " + std::to_string(n));
        return static_cast<std::size_t>(n);
    }

    /// Total free slack s - (n+1)D.
    [[nodiscard]] double free_slack() const { return s - (n + 1.0) * D; }

    /// Checks 0 < d <= s, 0 <= D <= d and n >= 1.
    void validate() const
    {
        require(std::isfinite(s) && s > 0, "boundary length s must be > 0");
        require(std::isfinite(d) && d > 0, "range d must be > 0");
        require(d <= s, "range d must not exceed boundary length s");
        require(std::isfinite(D) && D >= 0, "robot diameter D must be >= 0");
        require(D <= d, "robot diameter D must not exceed range d");
        require(std::isfinite(n) && n >= 1, "swarm size n must be >= 1");
    }

    /// validate() plus the conflict-free requirement (n+1)D < s.
    void validate_cf() const
    {
        validate();
        require(free_slack() > 0, "conflict-free scenario needs (n+1)*D < s");
    }
};

} // namespace swarmcov
