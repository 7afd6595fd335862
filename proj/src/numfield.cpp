#include "hypchrom/numfield.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <deque>
#include <map>
#include <mutex>
#include <vector>

#include "bigfloat.hpp"

namespace hypchrom {

namespace {

bool all_digits(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char ch) { return std::isdigit(ch) != 0; });
}

}  // namespace

Rational parse_rational(std::string_view text) {
    std::string_view num = text;
    std::string_view den = "1";
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    std::string_view digits = num;
    if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.remove_prefix(1);
    if (!all_digits(digits) || !all_digits(den))
        throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    std::string num_s(num);
    if (num_s.front() == '+') num_s.erase(0, 1);
    Integer n(num_s, 10);
    Integer d(std::string(den), 10);
    if (d == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
    Rational r(n, d);
    r.canonicalize();
    return r;
}

std::string format_rational(const Rational& r) {
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

// ---------------------------------------------------------------------------
// RatInterval

RatInterval::RatInterval(Rational l, Rational h) : lo(std::move(l)), hi(std::move(h)) {
    if (hi < lo) std::swap(lo, hi);
}

RatInterval operator+(const RatInterval& a, const RatInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }
RatInterval operator-(const RatInterval& a, const RatInterval& b) { return {a.lo - b.hi, a.hi - b.lo}; }
RatInterval operator-(const RatInterval& a) { return {-a.hi, -a.lo}; }

RatInterval operator*(const RatInterval& a, const RatInterval& b) {
    if (a.lo >= 0 && b.lo >= 0) return {a.lo * b.lo, a.hi * b.hi};
    std::array<Rational, 4> p{a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
    auto [mn, mx] = std::minmax_element(p.begin(), p.end());
    return {*mn, *mx};
}

RatInterval operator/(const RatInterval& a, const RatInterval& b) {
    if (b.contains_zero()) throw DivisionByZero("interval division by an interval containing zero");
    return a * RatInterval(1 / b.hi, 1 / b.lo);
}

namespace {

// floor(sqrt(x) * 2^bits) for x >= 0
Integer scaled_sqrt_floor(const Rational& x, unsigned bits) {
    Integer scaled = x.get_num();
    mpz_mul_2exp(scaled.get_mpz_t(), scaled.get_mpz_t(), 2 * bits);
    mpz_fdiv_q(scaled.get_mpz_t(), scaled.get_mpz_t(), x.get_den().get_mpz_t());
    Integer s;
    mpz_sqrt(s.get_mpz_t(), scaled.get_mpz_t());
    return s;
}

Rational scale_down(const Integer& v, unsigned bits) {
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 2, bits);
    Rational r(v, den);
    r.canonicalize();
    return r;
}

}  // namespace

RatInterval sqrt(const RatInterval& a, unsigned bits) {
    if (a.hi < 0) throw std::domain_error("sqrt of a negative interval");
    Rational lo_in = a.lo < 0 ? Rational(0) : a.lo;
    Integer lo = scaled_sqrt_floor(lo_in, bits);
    Integer hi = scaled_sqrt_floor(a.hi, bits);
    hi += 1;  // floor + 1 > sqrt(hi) * 2^bits
    RatInterval r(scale_down(lo, bits), scale_down(hi, bits));
    // Exact squares stay exact.
    if (r.lo * r.lo == lo_in && lo_in == a.hi) r.hi = r.lo;
    return r;
}

// ---------------------------------------------------------------------------
// FieldElement

namespace {

// c^4 = (-1 + 2c + 12c^2 - 8c^3) / 16
const std::array<Rational, 4>& reduction_row() {
    static const std::array<Rational, 4> row{Rational(-1, 16), Rational(1, 8), Rational(3, 4),
                                             Rational(-1, 2)};
    return row;
}

constexpr double kRootApprox = 0.6778371469890411;

}  // namespace

const std::array<long, 5>& minimal_polynomial() {
    static const std::array<long, 5> poly{1, -2, -12, 8, 16};
    return poly;
}

Rational minimal_polynomial_at(const Rational& x) {
    Rational acc = 0;
    const auto& p = minimal_polynomial();
    for (int k = 4; k >= 0; --k) acc = acc * x + p[static_cast<size_t>(k)];
    return acc;
}

FieldElement::FieldElement(Rational a0, Rational a1, Rational a2, Rational a3)
    : c_{std::move(a0), std::move(a1), std::move(a2), std::move(a3)} {
    for (auto& q : c_) q.canonicalize();
}

bool FieldElement::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return sgn(q) == 0; });
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
    for (size_t k = 0; k < 4; ++k) c_[k] += o.c_[k];
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
    for (size_t k = 0; k < 4; ++k) c_[k] -= o.c_[k];
    return *this;
}

FieldElement FieldElement::operator-() const {
    FieldElement r(*this);
    for (auto& q : r.c_) q = -q;
    return r;
}

FieldElement& FieldElement::operator*=(const FieldElement& o) {
    std::array<Rational, 7> p{};
    for (size_t i = 0; i < 4; ++i) {
        if (sgn(c_[i]) == 0) continue;
        for (size_t j = 0; j < 4; ++j) {
            if (sgn(o.c_[j]) == 0) continue;
            p[i + j] += c_[i] * o.c_[j];
        }
    }
    const auto& row = reduction_row();
    for (size_t k = 6; k >= 4; --k) {
        if (sgn(p[k]) == 0) continue;
        for (size_t j = 0; j < 4; ++j) p[k - 4 + j] += p[k] * row[j];
    }
    for (size_t k = 0; k < 4; ++k) c_[k] = std::move(p[k]);
    return *this;
}

FieldElement FieldElement::times_generator() const {
    const auto& row = reduction_row();
    FieldElement r;
    r.c_[0] = 0;
    for (size_t k = 1; k < 4; ++k) r.c_[k] = c_[k - 1];
    if (sgn(c_[3]) != 0)
        for (size_t j = 0; j < 4; ++j) r.c_[j] += c_[3] * row[j];
    return r;
}

namespace {

using Poly = std::vector<Rational>;  // constant term first

void trim(Poly& p) {
    while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

// q, r with a = q*b + r
std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
    Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0);
    while (a.size() >= b.size() && !a.empty()) {
        size_t shift = a.size() - b.size();
        Rational coef = a.back() / b.back();
        q[shift] = coef;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= coef * b[i];
        a.pop_back();
        trim(a);
    }
    trim(q);
    return {q, a};
}

Poly mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

Poly sub(Poly a, const Poly& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    trim(a);
    return a;
}

}  // namespace

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw DivisionByZero("division by the zero field element");
    Poly r0;
    for (long v : minimal_polynomial()) r0.emplace_back(v);
    Poly r1(c_.begin(), c_.end());
    trim(r1);
    Poly s0;
    Poly s1{Rational(1)};
    while (!r1.empty()) {
        auto [q, rem] = divmod(r0, r1);
        r0 = std::move(r1);
        r1 = std::move(rem);
        Poly next = sub(s0, mul(q, s1));
        s0 = std::move(s1);
        s1 = std::move(next);
    }
    // r0 is a nonzero constant because the modulus is irreducible.
    Rational scale = 1 / r0.front();
    FieldElement inv;
    for (size_t k = 0; k < s0.size() && k < 4; ++k) inv.c_[k] = s0[k] * scale;
    return inv;
}

FieldElement& FieldElement::operator/=(const FieldElement& o) { return *this *= o.inverse(); }

double FieldElement::approx() const {
    double acc = 0;
    for (int k = 3; k >= 0; --k) acc = acc * kRootApprox + c_[static_cast<size_t>(k)].get_d();
    return acc;
}

std::string FieldElement::to_string() const {
    std::string out;
    for (size_t k = 0; k < 4; ++k) {
        if (k) out += ' ';
        out += format_rational(c_[k]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Root isolation and sign determination

namespace {

struct RootLevel {
    unsigned bits = 0;
    RootInterval iv;
    std::array<Rational, 4> lo_pow;
    std::array<Rational, 4> hi_pow;
};

class RootCache {
public:
    const RootLevel& level(size_t idx) {
        std::lock_guard lock(mu_);
        while (levels_.size() <= idx) extend();
        return levels_[idx];
    }

    const RootLevel& for_bits(unsigned bits) {
        size_t idx = 0;
        while ((64u << idx) < bits) ++idx;
        return level(idx);
    }

private:
    void extend() {
        RootInterval iv = levels_.empty() ? seed_root_interval() : levels_.back().iv;
        unsigned bits = 64u << levels_.size();
        Rational target = scale_down(Integer(1), bits);
        int lo_sign = sgn(minimal_polynomial_at(iv.lo));
        while (iv.hi - iv.lo > target) {
            Rational m = (iv.lo + iv.hi) / 2;
            int s = sgn(minimal_polynomial_at(m));
            if (s == 0) {
                // A rational root cannot occur (irreducible quartic), keep the branch for safety.
                iv.lo = iv.hi = m;
                break;
            }
            if (s == lo_sign)
                iv.lo = m;
            else
                iv.hi = m;
        }
        RootLevel lvl;
        lvl.bits = bits;
        lvl.iv = iv;
        lvl.lo_pow[0] = lvl.hi_pow[0] = 1;
        for (size_t k = 1; k < 4; ++k) {
            lvl.lo_pow[k] = lvl.lo_pow[k - 1] * iv.lo;
            lvl.hi_pow[k] = lvl.hi_pow[k - 1] * iv.hi;
        }
        levels_.push_back(std::move(lvl));
    }

    std::mutex mu_;
    std::deque<RootLevel> levels_;
};

RootCache& root_cache() {
    static RootCache cache;
    return cache;
}

// The designated root is positive, so c^k is monotone on the interval.
RatInterval evaluate_level(const FieldElement& a, const std::array<Rational, 4>& lo_pow,
                           const std::array<Rational, 4>& hi_pow) {
    RatInterval acc(a[0]);
    for (int k = 1; k < 4; ++k) {
        const Rational& coef = a[k];
        int s = sgn(coef);
        if (s == 0) continue;
        size_t kk = static_cast<size_t>(k);
        if (s > 0) {
            acc.lo += coef * lo_pow[kk];
            acc.hi += coef * hi_pow[kk];
        } else {
            acc.lo += coef * hi_pow[kk];
            acc.hi += coef * lo_pow[kk];
        }
    }
    return acc;
}

bool is_rational(const FieldElement& a) { return sgn(a[1]) == 0 && sgn(a[2]) == 0 && sgn(a[3]) == 0; }

}  // namespace

RootInterval seed_root_interval() { return {Rational(27, 40), Rational(7, 10)}; }

RootInterval root_interval(unsigned bits) { return root_cache().for_bits(bits).iv; }

RatInterval evaluate(const FieldElement& a, const RootInterval& root) {
    std::array<Rational, 4> lo_pow;
    std::array<Rational, 4> hi_pow;
    lo_pow[0] = hi_pow[0] = 1;
    for (size_t k = 1; k < 4; ++k) {
        lo_pow[k] = lo_pow[k - 1] * root.lo;
        hi_pow[k] = hi_pow[k - 1] * root.hi;
    }
    return evaluate_level(a, lo_pow, hi_pow);
}

int sign(const FieldElement& a) {
    if (is_rational(a)) return sgn(a[0]);
    if (a.is_zero()) return 0;
    for (size_t idx = 0;; ++idx) {
        const RootLevel& lvl = root_cache().level(idx);
        RatInterval v = evaluate_level(a, lvl.lo_pow, lvl.hi_pow);
        if (v.lo > 0) return 1;
        if (v.hi < 0) return -1;
    }
}

RatInterval to_interval(const FieldElement& a, const Rational& target_width) {
    if (target_width <= 0) throw std::invalid_argument("target width must be positive");
    if (is_rational(a)) return RatInterval(a[0]);
    for (size_t idx = 0;; ++idx) {
        const RootLevel& lvl = root_cache().level(idx);
        RatInterval v = evaluate_level(a, lvl.lo_pow, lvl.hi_pow);
        if (v.width() <= target_width) return v;
    }
}

// ---------------------------------------------------------------------------
// Square roots

namespace detail {

std::optional<Rational> rationalize(const BigFloat& x, const Integer& bound, const BigFloat& tol) {
    const mpfr_prec_t prec = x.prec();
    Integer h_prev2 = 0, h_prev = 1;
    Integer k_prev2 = 1, k_prev = 0;
    BigFloat y(x);
    std::optional<Rational> best;
    for (int iter = 0; iter < 4 * prec; ++iter) {
        Integer a = y.floor();
        Integer h = a * h_prev + h_prev2;
        Integer k = a * k_prev + k_prev2;
        if (k > bound) break;
        best = Rational(h, k);
        best->canonicalize();
        BigFloat frac = y - BigFloat(prec, a);
        if (frac.is_zero()) break;
        y = BigFloat(prec, 1L) / frac;
        h_prev2 = h_prev;
        h_prev = h;
        k_prev2 = k_prev;
        k_prev = k;
        BigFloat err = (x - BigFloat(prec, *best)).abs();
        if (!(tol < err)) break;
    }
    if (!best) return std::nullopt;
    BigFloat err = (x - BigFloat(prec, *best)).abs();
    if (tol < err) return std::nullopt;
    return best;
}

unsigned coefficient_bits(const FieldElement& a) {
    size_t bits = 0;
    for (const auto& q : a.coeffs()) {
        bits = std::max(bits, mpz_sizeinbase(q.get_num().get_mpz_t(), 2));
        bits = std::max(bits, mpz_sizeinbase(q.get_den().get_mpz_t(), 2));
    }
    return static_cast<unsigned>(bits);
}

}  // namespace detail

namespace {

using detail::BigFloat;

// All four real roots of the minimal polynomial (designated root first) and
// the coefficients of the Lagrange basis polynomials through them.
struct ConjugateTable {
    std::vector<BigFloat> roots;
    std::vector<std::vector<BigFloat>> lagrange;  // lagrange[i][k]: coeff of x^k in L_i
};

BigFloat poly_at(const BigFloat& x) {
    const auto& p = minimal_polynomial();
    BigFloat acc(x.prec(), 0L);
    for (int k = 4; k >= 0; --k) acc = acc * x + BigFloat(x.prec(), p[static_cast<size_t>(k)]);
    return acc;
}

BigFloat dpoly_at(const BigFloat& x) {
    const auto& p = minimal_polynomial();
    BigFloat acc(x.prec(), 0L);
    for (int k = 4; k >= 1; --k) acc = acc * x + BigFloat(x.prec(), p[static_cast<size_t>(k)] * k);
    return acc;
}

ConjugateTable build_conjugates(mpfr_prec_t prec) {
    const double s5 = std::sqrt(5.0);
    const std::array<double, 4> seeds{(-1 + s5 + std::sqrt(22 - 2 * s5)) / 8, (-1 + s5 - std::sqrt(22 - 2 * s5)) / 8,
                                      (-1 - s5 + std::sqrt(22 + 2 * s5)) / 8, (-1 - s5 - std::sqrt(22 + 2 * s5)) / 8};
    ConjugateTable t;
    for (double seed : seeds) {
        BigFloat x(prec);
        mpfr_set_d(x.get(), seed, MPFR_RNDN);
        for (int iter = 0; iter < 64; ++iter) {
            BigFloat step = poly_at(x) / dpoly_at(x);
            x -= step;
            if (step.is_zero() || step.exponent() < x.exponent() - static_cast<long>(prec) + 4) break;
        }
        t.roots.push_back(x);
    }
    for (size_t i = 0; i < 4; ++i) {
        std::vector<BigFloat> coeff{BigFloat(prec, 1L)};
        BigFloat denom(prec, 1L);
        for (size_t j = 0; j < 4; ++j) {
            if (j == i) continue;
            // multiply by (x - r_j)
            std::vector<BigFloat> next(coeff.size() + 1, BigFloat(prec, 0L));
            for (size_t k = 0; k < coeff.size(); ++k) {
                next[k + 1] += coeff[k];
                next[k] -= coeff[k] * t.roots[j];
            }
            coeff = std::move(next);
            denom *= t.roots[i] - t.roots[j];
        }
        for (auto& v : coeff) v /= denom;
        t.lagrange.push_back(std::move(coeff));
    }
    return t;
}

const ConjugateTable& conjugates(mpfr_prec_t prec) {
    static std::mutex mu;
    static std::map<mpfr_prec_t, ConjugateTable> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(prec);
    if (it == cache.end()) it = cache.emplace(prec, build_conjugates(prec)).first;
    return it->second;
}

}  // namespace

std::optional<FieldElement> sqrt(const FieldElement& d, const SqrtConfig& cfg) {
    if (d.is_zero()) return FieldElement::zero();
    if (sign(d) < 0) throw std::domain_error("sqrt of a negative field element");

    // Scale to D' = M^2 d, an algebraic integer, so sqrt(D') = M sqrt(d) has
    // coefficients with tiny denominators (the index of Z[2c] is 5).
    Integer scale = 1;
    for (int k = 0; k < 4; ++k) {
        Integer den = d[k].get_den();
        mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
        mpz_lcm(scale.get_mpz_t(), scale.get_mpz_t(), den.get_mpz_t());
    }
    const Rational scale_sq = Rational(scale * scale);
    FieldElement scaled = d * FieldElement(scale_sq);

    unsigned need = cfg.precision_bits + detail::coefficient_bits(scaled) + 64;
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>((need + 127) / 128 * 128);
    const ConjugateTable& table = conjugates(prec);

    std::array<BigFloat, 4> roots_of_conj{BigFloat(prec), BigFloat(prec), BigFloat(prec), BigFloat(prec)};
    for (size_t i = 0; i < 4; ++i) {
        BigFloat acc(prec, 0L);
        for (int k = 3; k >= 0; --k) acc = acc * table.roots[i] + BigFloat(prec, scaled[k]);
        if (acc.sgn() <= 0) return std::nullopt;  // a square is totally positive
        roots_of_conj[i] = acc.sqrt();
    }

    BigFloat tol(prec, 1L);
    mpfr_mul_2si(tol.get(), tol.get(), -static_cast<long>(prec / 2), MPFR_RNDN);
    const Integer bound(cfg.denom_bound);

    for (unsigned pattern = 0; pattern < 8; ++pattern) {
        std::array<Rational, 4> coef;
        bool ok = true;
        for (size_t k = 0; k < 4 && ok; ++k) {
            BigFloat acc(prec, 0L);
            for (size_t i = 0; i < 4; ++i) {
                bool negate = i > 0 && ((pattern >> (i - 1)) & 1u);
                BigFloat term = roots_of_conj[i] * table.lagrange[i][k];
                if (negate)
                    acc -= term;
                else
                    acc += term;
            }
            auto q = detail::rationalize(acc, bound, tol);
            if (!q) ok = false;
            else coef[k] = *q / scale;
        }
        if (!ok) continue;
        FieldElement t(coef[0], coef[1], coef[2], coef[3]);
        if (t * t == d) {
            if (sign(t) < 0) t = -t;
            return t;
        }
    }
    return std::nullopt;
}

}  // namespace hypchrom
