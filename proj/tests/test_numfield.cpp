#include <doctest.h>

#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include <mpfr.h>

#include "hypchrom/numfield.hpp"

using namespace hypchrom;

namespace {

// 70 digits of the designated root, computed independently with mpmath.
const char* kRootDigits = "0.6778371469890411132892002974793177313548347618342680392041324080324405";

Rational root_oracle() {
    // digits / 10^70
    std::string s(kRootDigits);
    std::string num = s.substr(2);
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(num.size()));
    Rational r(Integer(num), den);
    r.canonicalize();
    return r;
}

FieldElement random_element(std::mt19937& rng, int span = 9) {
    std::uniform_int_distribution<int> num(-span, span);
    std::uniform_int_distribution<int> den(1, 6);
    return {Rational(num(rng), den(rng)), Rational(num(rng), den(rng)), Rational(num(rng), den(rng)),
            Rational(num(rng), den(rng))};
}

}  // namespace

TEST_CASE("rational parsing and formatting") {
    CHECK(format_rational(parse_rational("6/4")) == "3/2");
    CHECK(format_rational(parse_rational("-14/58")) == "-7/29");
    CHECK(format_rational(parse_rational("5")) == "5/1");
    CHECK(format_rational(parse_rational("+0/7")) == "0/1");
    CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/-2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational(""), std::invalid_argument);
    CHECK_THROWS_AS(parse_rational("1/2/3"), std::invalid_argument);
}

TEST_CASE("c satisfies its minimal polynomial") {
    const FieldElement c = FieldElement::generator();
    const FieldElement c2 = c * c;
    const FieldElement c3 = c2 * c;
    const FieldElement c4 = c3 * c;
    CHECK((16 * c4 + 8 * c3 - 12 * c2 - 2 * c + 1).is_zero());
    CHECK(c4 == FieldElement(Rational(-1, 16), Rational(1, 8), Rational(3, 4), Rational(-1, 2)));
    CHECK(c3.times_generator() == c4);
}

TEST_CASE("root isolation brackets the independent oracle") {
    const RootInterval seed = seed_root_interval();
    CHECK(seed.lo == Rational(27, 40));
    CHECK(seed.hi == Rational(7, 10));
    CHECK(sgn(minimal_polynomial_at(seed.lo)) * sgn(minimal_polynomial_at(seed.hi)) < 0);
    const Rational oracle = root_oracle();
    for (unsigned bits : {10u, 64u, 100u, 200u}) {
        RootInterval r = root_interval(bits);
        Rational w = r.hi - r.lo;
        Rational bound(1);
        mpq_div_2exp(bound.get_mpq_t(), bound.get_mpq_t(), bits);
        CHECK(w <= bound);
        // The oracle carries about 232 bits; it must land inside (or within
        // 1e-69 of) every enclosure.
        Rational slack(1, 1);
        Integer p;
        mpz_ui_pow_ui(p.get_mpz_t(), 10, 69);
        slack /= Rational(p);
        CHECK(r.lo - slack <= oracle);
        CHECK(oracle <= r.hi + slack);
    }
}

TEST_CASE("closed form of c") {
    const double closed = (-1 + std::sqrt(5.0) + std::sqrt(22 - 2 * std::sqrt(5.0))) / 8;
    CHECK(FieldElement::generator().approx() == doctest::Approx(closed).epsilon(1e-15));
    // sqrt(5) lies in the field.
    auto s5 = sqrt(FieldElement(5));
    REQUIRE(s5.has_value());
    CHECK(*s5 * *s5 == FieldElement(5));
    CHECK(s5->approx() == doctest::Approx(std::sqrt(5.0)).epsilon(1e-14));
}

TEST_CASE("field axioms on random elements") {
    std::mt19937 rng(20240601);
    for (int trial = 0; trial < 200; ++trial) {
        const FieldElement a = random_element(rng);
        const FieldElement b = random_element(rng);
        const FieldElement c = random_element(rng);
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a - a == FieldElement::zero());
        if (!a.is_zero()) {
            CHECK(a * a.inverse() == FieldElement::one());
            CHECK((b / a) * a == b);
        }
        // Double evaluation is a ring homomorphism up to rounding.
        const double scale = 1 + std::abs(a.approx() * b.approx());
        CHECK(std::abs((a * b).approx() - a.approx() * b.approx()) < 1e-12 * scale);
    }
    CHECK_THROWS_AS(FieldElement::zero().inverse(), DivisionByZero);
    CHECK_THROWS_AS(FieldElement::one() / FieldElement::zero(), DivisionByZero);
}

TEST_CASE("exact sign near cancellation") {
    const Rational oracle = root_oracle();
    // c - q for rationals q straddling c within 1e-60.
    Integer p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, 60);
    const Rational eps = Rational(1) / Rational(p);
    const FieldElement c = FieldElement::generator();
    CHECK(sign(c - FieldElement(oracle - eps)) == 1);
    CHECK(sign(c - FieldElement(oracle + eps)) == -1);
    CHECK(sign(FieldElement::zero()) == 0);
    CHECK(sign(2 * c - 1) == 1);
    CHECK(sign(1 - c) == 1);
    CHECK(sign(FieldElement(Rational(-1, 3))) == -1);
}

TEST_CASE("enclosures match an independent MPFR evaluation") {
    std::mt19937 rng(7);
    mpfr_t x, acc, term;
    mpfr_inits2(400, x, acc, term, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_str(x, kRootDigits, 10, MPFR_RNDN);
    for (int trial = 0; trial < 50; ++trial) {
        const FieldElement a = random_element(rng, 1000);
        mpfr_set_ui(acc, 0, MPFR_RNDN);
        for (int k = 3; k >= 0; --k) {
            mpfr_mul(acc, acc, x, MPFR_RNDN);
            mpfr_set_q(term, a[k].get_mpq_t(), MPFR_RNDN);
            mpfr_add(acc, acc, term, MPFR_RNDN);
        }
        Rational w(1);
        mpq_div_2exp(w.get_mpq_t(), w.get_mpq_t(), 150);
        RatInterval iv = to_interval(a, w);
        CHECK(iv.width() <= w);
        mpfr_set_q(term, iv.mid().get_mpq_t(), MPFR_RNDN);
        mpfr_sub(term, term, acc, MPFR_RNDN);
        // Oracle error ~1e-67 times the coefficient size.
        CHECK(std::abs(mpfr_get_d(term, MPFR_RNDN)) < 1e-40);
    }
    mpfr_clears(x, acc, term, static_cast<mpfr_ptr>(nullptr));
}

TEST_CASE("interval arithmetic") {
    RatInterval a(Rational(-1), Rational(2));
    RatInterval b(Rational(3), Rational(4));
    CHECK((a * b).lo == -4);
    CHECK((a * b).hi == 8);
    CHECK((a - b).lo == -5);
    CHECK((a / b).hi == Rational(2, 3));
    CHECK_THROWS_AS(b / a, DivisionByZero);
    RatInterval s = sqrt(RatInterval(Rational(2)), 60);
    CHECK(s.lo * s.lo <= 2);
    CHECK(s.hi * s.hi >= 2);
    CHECK(sqrt(RatInterval(Rational(9, 4)), 8).hi == Rational(3, 2));
    CHECK_THROWS_AS(sqrt(RatInterval(Rational(-1)), 8), std::domain_error);
}

TEST_CASE("field square roots") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const FieldElement a = random_element(rng);
        if (a.is_zero()) continue;
        const FieldElement sq = a * a;
        auto r = sqrt(sq);
        REQUIRE(r.has_value());
        CHECK(*r * *r == sq);
        CHECK(sign(*r) >= 0);
        CHECK((*r == a || *r == -a));
    }
    // c has negative conjugates, so it is no square; neither is 2.
    CHECK_FALSE(sqrt(FieldElement::generator()).has_value());
    CHECK_FALSE(sqrt(FieldElement(2)).has_value());
    CHECK(sqrt(FieldElement::zero()) == FieldElement::zero());
    CHECK_THROWS_AS(sqrt(FieldElement(-4)), std::domain_error);
}

TEST_CASE("concurrent sign determination agrees") {
    std::mt19937 rng(3);
    std::vector<FieldElement> xs;
    for (int i = 0; i < 40; ++i) xs.push_back(random_element(rng, 50) - FieldElement(Rational(i, 7)));
    std::vector<int> expected;
    for (const auto& x : xs) expected.push_back(sign(x));
    std::vector<std::vector<int>> got(4);
    std::vector<std::thread> pool;
    for (int t = 0; t < 4; ++t)
        pool.emplace_back([&, t] {
            for (const auto& x : xs) got[static_cast<std::size_t>(t)].push_back(sign(x));
            root_interval(300 + 10 * static_cast<unsigned>(t));
        });
    for (auto& th : pool) th.join();
    for (const auto& g : got) CHECK(g == expected);
}
