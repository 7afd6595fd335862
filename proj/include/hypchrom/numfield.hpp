#pragma once

// Exact arithmetic in the quartic field Q(c), where c ~ 0.6778371470 is the
// largest real root of 16c^4 + 8c^3 - 12c^2 - 2c + 1.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace hypchrom {

using Rational = mpq_class;
using Integer = mpz_class;

/// Parses "num/den" or "num". Throws std::invalid_argument on malformed text
/// or a zero denominator.
Rational parse_rational(std::string_view text);

/// Always emits "num/den" in lowest terms, e.g. "0/1", "-3/2".
std::string format_rational(const Rational& r);

class DivisionByZero : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Closed rational interval [lo, hi].
struct RatInterval {
    Rational lo;
    Rational hi;

    RatInterval() = default;
    explicit RatInterval(const Rational& v) : lo(v), hi(v) {}
    RatInterval(Rational l, Rational h);

    Rational width() const { return hi - lo; }
    Rational mid() const { return (lo + hi) / 2; }
    bool contains(const Rational& v) const { return lo <= v && v <= hi; }
    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    bool overlaps(const RatInterval& o) const { return lo <= o.hi && o.lo <= hi; }
    double mid_double() const { return mid().get_d(); }
};

RatInterval operator+(const RatInterval& a, const RatInterval& b);
RatInterval operator-(const RatInterval& a, const RatInterval& b);
RatInterval operator-(const RatInterval& a);
RatInterval operator*(const RatInterval& a, const RatInterval& b);
/// Throws DivisionByZero if b contains zero.
RatInterval operator/(const RatInterval& a, const RatInterval& b);
/// Enclosure of sqrt over a nonnegative interval, endpoints rounded outward
/// to multiples of 2^-bits.
RatInterval sqrt(const RatInterval& a, unsigned bits);

/// Element a0 + a1 c + a2 c^2 + a3 c^3 of Q(c). Coefficients are always the
/// canonical (degree <= 3, lowest terms) representative, so equality is
/// coefficient-wise.
class FieldElement {
public:
    FieldElement() = default;
    FieldElement(long v) : c_{Rational(v), 0, 0, 0} {}  // NOLINT: implicit on purpose
    FieldElement(const Rational& v) : c_{v, 0, 0, 0} { c_[0].canonicalize(); }  // NOLINT
    FieldElement(Rational a0, Rational a1, Rational a2, Rational a3);

    static FieldElement zero() { return {}; }
    static FieldElement one() { return {1}; }
    static FieldElement generator() { return {0, 1, 0, 0}; }

    const Rational& operator[](int k) const { return c_[static_cast<size_t>(k)]; }
    const std::array<Rational, 4>& coeffs() const { return c_; }
    bool is_zero() const;

    FieldElement& operator+=(const FieldElement& o);
    FieldElement& operator-=(const FieldElement& o);
    FieldElement& operator*=(const FieldElement& o);
    FieldElement& operator/=(const FieldElement& o);

    friend FieldElement operator+(FieldElement a, const FieldElement& b) { return a += b; }
    friend FieldElement operator-(FieldElement a, const FieldElement& b) { return a -= b; }
    friend FieldElement operator*(FieldElement a, const FieldElement& b) { return a *= b; }
    friend FieldElement operator/(FieldElement a, const FieldElement& b) { return a /= b; }
    FieldElement operator-() const;

    friend bool operator==(const FieldElement& a, const FieldElement& b) { return a.c_ == b.c_; }
    friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

    /// Multiplicative inverse via extended Euclid against the minimal
    /// polynomial. Throws DivisionByZero for the zero element.
    FieldElement inverse() const;

    /// Fast, non-rigorous double approximation at the designated root.
    double approx() const;

    /// Multiplication by c, reduced.
    FieldElement times_generator() const;

    /// "a0 a1 a2 a3" with each coefficient as "num/den".
    std::string to_string() const;

private:
    std::array<Rational, 4> c_{};
};

/// Coefficients of the minimal polynomial, constant term first:
/// {1, -2, -12, 8, 16}.
const std::array<long, 5>& minimal_polynomial();

/// Evaluates 16x^4 + 8x^3 - 12x^2 - 2x + 1 at a rational.
Rational minimal_polynomial_at(const Rational& x);

/// Isolating interval for the designated root.
struct RootInterval {
    Rational lo;
    Rational hi;
};

/// Seed isolating interval [27/40, 7/10].
RootInterval seed_root_interval();

/// Isolating interval of width <= 2^-bits obtained by bisecting the seed.
/// Results are cached process-wide (internally synchronized).
RootInterval root_interval(unsigned bits);

/// Enclosure of a's value at the designated root using the isolating
/// interval of width 2^-bits.
RatInterval evaluate(const FieldElement& a, const RootInterval& root);

/// Exact sign at the designated root. 0 iff a is the zero element.
int sign(const FieldElement& a);

/// Enclosure of the value of a with width <= target_width (> 0).
RatInterval to_interval(const FieldElement& a, const Rational& target_width);

struct SqrtConfig {
    unsigned precision_bits = 256;
    long denom_bound = 1000000;
};

/// Square root inside Q(c): returns t with t*t == d exactly and sign(t) >= 0,
/// or nullopt if d is not a square in the field (within the configured
/// denominator bound). Throws std::domain_error for negative d.
std::optional<FieldElement> sqrt(const FieldElement& d, const SqrtConfig& cfg = {});

}  // namespace hypchrom
