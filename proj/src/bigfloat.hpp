#pragma once

// Minimal RAII wrapper over mpfr_t for the heuristic reconstruction steps
// (square roots in the field, integer relations). Results of these steps are
// always re-verified in exact arithmetic, so round-to-nearest is enough here.

#include <mpfr.h>

#include <optional>
#include <utility>

#include "hypchrom/numfield.hpp"

namespace hypchrom::detail {

class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t prec) { mpfr_init2(v_, prec); mpfr_set_zero(v_, 1); }
    BigFloat(mpfr_prec_t prec, long x) : BigFloat(prec) { mpfr_set_si(v_, x, MPFR_RNDN); }
    BigFloat(mpfr_prec_t prec, const Rational& x) : BigFloat(prec) {
        mpfr_set_q(v_, x.get_mpq_t(), MPFR_RNDN);
    }
    BigFloat(mpfr_prec_t prec, const Integer& x) : BigFloat(prec) {
        mpfr_set_z(v_, x.get_mpz_t(), MPFR_RNDN);
    }
    BigFloat(const BigFloat& o) { mpfr_init2(v_, mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept : BigFloat(mpfr_get_prec(o.v_)) { mpfr_swap(v_, o.v_); }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(v_); }

    mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }

    BigFloat& operator+=(const BigFloat& o) { mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    BigFloat& operator/=(const BigFloat& o) { mpfr_div(v_, v_, o.v_, MPFR_RNDN); return *this; }

    friend BigFloat operator+(BigFloat a, const BigFloat& b) { return a += b; }
    friend BigFloat operator-(BigFloat a, const BigFloat& b) { return a -= b; }
    friend BigFloat operator*(BigFloat a, const BigFloat& b) { return a *= b; }
    friend BigFloat operator/(BigFloat a, const BigFloat& b) { return a /= b; }
    BigFloat operator-() const {
        BigFloat r(*this);
        mpfr_neg(r.v_, r.v_, MPFR_RNDN);
        return r;
    }

    int sgn() const { return mpfr_sgn(v_); }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.v_, b.v_) != 0; }

    BigFloat abs() const {
        BigFloat r(*this);
        mpfr_abs(r.v_, r.v_, MPFR_RNDN);
        return r;
    }
    BigFloat sqrt() const {
        BigFloat r(prec());
        mpfr_sqrt(r.v_, v_, MPFR_RNDN);
        return r;
    }
    /// Nearest integer.
    Integer round() const {
        Integer z;
        mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDN);
        return z;
    }
    Integer floor() const {
        Integer z;
        mpfr_get_z(z.get_mpz_t(), v_, MPFR_RNDD);
        return z;
    }
    /// log2 of the magnitude (exponent), or a large negative number for zero.
    long exponent() const { return is_zero() ? -(1L << 40) : static_cast<long>(mpfr_get_exp(v_)); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// Exact rational value of the binary float.
    Rational to_rational() const {
        Rational q;
        if (is_zero()) return q;
        mpz_t m;
        mpz_init(m);
        mpfr_exp_t e = mpfr_get_z_2exp(m, v_);
        Integer mant(m);
        mpz_clear(m);
        if (e >= 0) {
            Integer p;
            mpz_mul_2exp(p.get_mpz_t(), mant.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
            q = Rational(p);
        } else {
            Integer d;
            mpz_ui_pow_ui(d.get_mpz_t(), 2, static_cast<unsigned long>(-e));
            q = Rational(mant, d);
            q.canonicalize();
        }
        return q;
    }

private:
    mpfr_t v_;
};

/// Best rational approximation p/q with 0 < q <= bound via continued
/// fractions, accepted only if |x - p/q| <= tol.
std::optional<Rational> rationalize(const BigFloat& x, const Integer& bound, const BigFloat& tol);

/// Bit length of the largest coefficient magnitude (numerator or
/// denominator) of a field element.
unsigned coefficient_bits(const FieldElement& a);

}  // namespace hypchrom::detail
