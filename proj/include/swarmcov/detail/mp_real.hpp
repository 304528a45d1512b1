#pragma once

// Minimal RAII value type over an MPFR variable. Every object carries its own
// precision; binary operators produce a result at the larger operand precision.

#include <mpfr.h>

#include <cstdint>
#include <utility>

namespace swarmcov::detail {

class mp_real {
public:
    explicit mp_real(mpfr_prec_t bits) { mpfr_init2(v_, bits); mpfr_set_zero(v_, 1); }

    mp_real(double x, mpfr_prec_t bits)
    {
        mpfr_init2(v_, bits);
        mpfr_set_d(v_, x, MPFR_RNDN);
    }

    mp_real(const mp_real& o)
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }

    mp_real(mp_real&& o) noexcept
    {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_swap(v_, o.v_);
    }

    mp_real& operator=(const mp_real& o)
    {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }

    mp_real& operator=(mp_real&& o) noexcept
    {
        mpfr_swap(v_, o.v_);
        return *this;
    }

    ~mp_real() { mpfr_clear(v_); }

    [[nodiscard]] mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    [[nodiscard]] double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    [[nodiscard]] int sign() const { return mpfr_sgn(v_); }
    [[nodiscard]] bool is_zero() const { return mpfr_zero_p(v_) != 0; }

    mp_real& operator+=(const mp_real& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    mp_real& operator-=(const mp_real& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    mp_real& operator*=(const mp_real& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    mp_real& operator/=(const mp_real& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }
    mp_real& operator+=(double x) { mpfr_add_d(v_, v_, x, MPFR_RNDN); return *this; }
    mp_real& operator-=(double x) { mpfr_sub_d(v_, v_, x, MPFR_RNDN); return *this; }
    mp_real& operator*=(double x) { mpfr_mul_d(v_, v_, x, MPFR_RNDN); return *this; }
    mp_real& operator/=(double x) { mpfr_div_d(v_, v_, x, MPFR_RNDN); return *this; }
    mp_real& mul_si(long x) { mpfr_mul_si(v_, v_, x, MPFR_RNDN); return *this; }
    mp_real& div_ui(unsigned long x) { mpfr_div_ui(v_, v_, x, MPFR_RNDN); return *this; }

    mp_real operator-() const
    {
        mp_real r(*this);
        mpfr_neg(r.v_, r.v_, MPFR_RNDN);
        return r;
    }

    friend mp_real operator+(mp_real a, const mp_real& b) { return widen(a, b) += b; }
    friend mp_real operator-(mp_real a, const mp_real& b) { return widen(a, b) -= b; }
    friend mp_real operator*(mp_real a, const mp_real& b) { return widen(a, b) *= b; }
    friend mp_real operator/(mp_real a, const mp_real& b) { return widen(a, b) /= b; }

    friend bool operator<(const mp_real& a, const mp_real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const mp_real& a, const mp_real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const mp_real& a, const mp_real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }

    friend mp_real abs(const mp_real& a)
    {
        mp_real r(a);
        mpfr_abs(r.v_, r.v_, MPFR_RNDN);
        return r;
    }

    /// max(a, 0)^e with 0^0 = 1.
    friend mp_real pow_clamped(const mp_real& base, const mp_real& exponent)
    {
        mp_real r(base.precision());
        if (exponent.is_zero()) {
            mpfr_set_ui(r.v_, 1, MPFR_RNDN);
        } else if (base.sign() > 0) {
            mpfr_pow(r.v_, base.v_, exponent.v_, MPFR_RNDN);
        }
        return r;
    }

    friend mp_real pow_clamped(const mp_real& base, unsigned long exponent)
    {
        mp_real r(base.precision());
        if (exponent == 0) {
            mpfr_set_ui(r.v_, 1, MPFR_RNDN);
        } else if (base.sign() > 0) {
            mpfr_pow_ui(r.v_, base.v_, exponent, MPFR_RNDN);
        }
        return r;
    }

    /// |a| * 2^e as a double, used for noise-floor estimates.
    friend double scaled_magnitude(const mp_real& a, long e)
    {
        mp_real r(abs(a));
        mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN);
        return r.to_double();
    }

private:
    static mp_real& widen(mp_real& a, const mp_real& b)
    {
        if (b.precision() > a.precision()) {
            mpfr_prec_round(a.v_, b.precision(), MPFR_RNDN);
        }
        return a;
    }

    mpfr_t v_;
};

} // namespace swarmcov::detail
