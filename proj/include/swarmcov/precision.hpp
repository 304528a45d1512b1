#pragma once

// Adaptive-precision evaluation of alternating inclusion-exclusion sums.
//
// The coverage closed forms are sums of the shape  sum_k (-1)^k C_k max(b_k,0)^e.
// At design-scale swarm sizes the individual terms reach 1e40 and more while
// the sum is O(1), so every sum is evaluated in MPFR at a working precision
// that is doubled until two successive evaluations agree.

#include "swarmcov/detail/mp_real.hpp"
#include "swarmcov/scenario.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>

namespace swarmcov {

using detail::mp_real;

struct PrecisionPolicy {
    double relative_accuracy = 1e-12;
    long initial_bits = 128;
    long max_bits = 16384;
    /// A result is only called zero (below the rounding-noise floor) once
    /// this many bits have been tried, so tiny but nonzero values resolve.
    long zero_bits = 1024;

    void validate() const
    {
        require(relative_accuracy > 0 && relative_accuracy < 1,
                "precision policy: relative accuracy must lie in (0,1)");
        require(initial_bits >= 16 && initial_bits <= max_bits,
                "precision policy: need 16 <= initial bits <= max bits");
    }
};

/// Signed running sum that also tracks sum |term| and the term count, so the
/// rounding-noise floor of an evaluation can be estimated.
class PieSum {
public:
    explicit PieSum(mpfr_prec_t bits) : sum_(bits), magnitude_(bits) {}

    void add(const mp_real& term)
    {
        if (term.is_zero()) {
            return;
        }
        sum_ += term;
        magnitude_ += abs(term);
        ++terms_;
    }

    void add(const mp_real& term, int sign)
    {
        if (sign >= 0) {
            add(term);
        } else {
            add(-term);
        }
    }

    [[nodiscard]] const mp_real& value() const { return sum_; }
    [[nodiscard]] const mp_real& magnitude() const { return magnitude_; }
    [[nodiscard]] std::size_t terms() const { return terms_; }
    [[nodiscard]] mpfr_prec_t precision() const { return sum_.precision(); }

    /// Adds another sum (evaluated at the same precision) with the given sign.
    void absorb(const PieSum& other, int sign)
    {
        if (sign >= 0) {
            sum_ += other.sum_;
        } else {
            sum_ -= other.sum_;
        }
        magnitude_ += other.magnitude_;
        terms_ += other.terms_;
    }

    /// Multiplies value and magnitude (used for common prefactors like 1/n!).
    void scale(const mp_real& factor)
    {
        sum_ *= factor;
        magnitude_ *= abs(factor);
    }

private:
    mp_real sum_;
    mp_real magnitude_;
    std::size_t terms_ = 0;
};

struct AdaptiveResult {
    double value = 0.0;
    long bits = 0;  ///< precision of the accepted (higher) evaluation
    double previous = 0.0;  ///< value at half that precision
};

namespace detail {

/// Rounding-noise level of an evaluation: sum|terms| * (terms+1) * 2^(8-bits).
inline double noise_floor(const PieSum& s)
{
    const auto k = static_cast<double>(s.terms() + 1);
    return scaled_magnitude(s.magnitude(), 8 - static_cast<long>(s.precision())) * k;
}

} // namespace detail

/// Evaluates `eval(bits) -> PieSum` at policy.initial_bits, 2x, 4x, ... until
/// two successive values agree to policy.relative_accuracy (or both sit below
/// the noise floor of the lower evaluation, i.e. the sum is zero to working
/// precision).
template <class Eval>
AdaptiveResult evaluate_adaptive(const PrecisionPolicy& policy, Eval&& eval)
{
    policy.validate();
    long bits = policy.initial_bits;
    PieSum low = eval(static_cast<mpfr_prec_t>(bits));
    while (bits * 2 <= policy.max_bits) {
        const long next = bits * 2;
        PieSum high = eval(static_cast<mpfr_prec_t>(next));
        const double v1 = low.value().to_double();
        const double v2 = high.value().to_double();
        const double diff = (high.value() - low.value()).to_double();
        const double floor1 = detail::noise_floor(low);
        const bool agree = std::abs(diff) <= policy.relative_accuracy * std::abs(v2);
        const bool both_zero = next >= std::min(policy.zero_bits, policy.max_bits)
                               && std::abs(v1) <= floor1 && std::abs(v2) <= floor1;
        if (agree || (low.terms() == 0 && high.terms() == 0)) {
            return {v2, next, v1};
        }
        if (both_zero) {
            return {0.0, next, v1};
        }
        low = std::move(high);
        bits = next;
    }
    throw computation_error("precision exhausted: alternating sum did not converge within "
                            + std::to_string(policy.max_bits) + " mantissa bits");
}

/// Generalized binomial coefficient C(x, k) = x (x-1) ... (x-k+1) / k! in MPFR.
/// Exact zero when x is a nonnegative integer below k.
inline mp_real binomial_mp(const mp_real& x, std::size_t k)
{
    mp_real r(1.0, x.precision());
    for (std::size_t j = 0; j < k; ++j) {
        mp_real factor(x);
        factor -= static_cast<double>(j);
        r *= factor;
        r.div_ui(static_cast<unsigned long>(j + 1));
    }
    return r;
}

struct BinomialValue {
    double value = 0.0;
    bool pole = false;  ///< denominator Gamma hit a pole (result forced to 0)
};

/// Gamma(x+1) / (Gamma(k+1) Gamma(x-k+1)) via log-Gamma with sign tracking.
inline BinomialValue generalized_binomial(double x, std::size_t k)
{
    const double kd = static_cast<double>(k);
    const auto is_nonpos_int = [](double z) { return z <= 0 && std::floor(z) == z; };
    if (k == 0) {
        return {1.0, false};
    }
    if (is_nonpos_int(x + 1)) {
        // Numerator pole as well: the limit is the falling-factorial product.
        double r = 1.0;
        for (std::size_t j = 0; j < k; ++j) {
            r *= (x - static_cast<double>(j)) / static_cast<double>(j + 1);
        }
        return {r, false};
    }
    if (is_nonpos_int(x - kd + 1)) {
        return {0.0, true};
    }
    const auto gamma_sign = [](double z) {
        if (z > 0) {
            return 1.0;
        }
        return std::fmod(std::floor(-z), 2.0) == 0.0 ? -1.0 : 1.0;
    };
    const double log_mag = std::lgamma(x + 1) - std::lgamma(kd + 1) - std::lgamma(x - kd + 1);
    double r = gamma_sign(x + 1) * gamma_sign(x - kd + 1) * std::exp(log_mag);
    if (x >= 0 && std::floor(x) == x) {
        r = std::round(r);
    }
    return {r, false};
}

} // namespace swarmcov
