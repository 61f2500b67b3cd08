#include "doctest.h"
#include "hypeq/rational.hpp"

#include <random>
#include <stdexcept>

using namespace hypeq;

TEST_CASE("bigint basics") {
    BigInt a(123456789012345LL), b(-987654321LL);
    CHECK(a.to_string() == "123456789012345");
    CHECK(b.to_string() == "-987654321");
    CHECK((a + b).to_string() == "123455801358024");
    CHECK((a * b).to_string() == "-121932631124827861592745");
    BigInt q, r;
    BigInt::divmod(a, BigInt(1000), q, r);
    CHECK(q.to_string() == "123456789012");
    CHECK(r.to_string() == "345");
    CHECK(BigInt::gcd(BigInt(48), BigInt(180)).to_string() == "12");
    CHECK(BigInt::pow(BigInt(2), 100).to_string() == "1267650600228229401496703205376");
}

TEST_CASE("bigint agrees with native arithmetic on random values") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long long> d(-1000000000LL, 1000000000LL);
    for (int i = 0; i < 500; ++i) {
        long long x = d(rng), y = d(rng);
        CHECK(BigInt(x) + BigInt(y) == BigInt(x + y));
        CHECK(BigInt(x) - BigInt(y) == BigInt(x - y));
        CHECK(BigInt(x) * BigInt(y) == BigInt(x * y));
        if (y != 0) {
            BigInt q, r;
            BigInt::divmod(BigInt(x), BigInt(y), q, r);
            CHECK(q == BigInt(x / y));
            CHECK(r == BigInt(x % y));
        }
    }
}

TEST_CASE("rational reduction and arithmetic") {
    Rational r(BigInt(6), BigInt(-8));
    CHECK(r.to_string() == "-3/4");
    CHECK((r + Rational(1)).to_string() == "1/4");
    CHECK((r * Rational(BigInt(4), BigInt(3))).to_string() == "-1");
    CHECK((Rational(1) / Rational(3)).to_string() == "1/3");
    CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
    CHECK(Rational::from_string("2.5").to_string() == "5/2");
    CHECK(Rational::from_string("-3/4").to_string() == "-3/4");
    CHECK(Rational::from_string("0.125").to_string() == "1/8");
    CHECK(Rational(BigInt(7), BigInt(2)).floor().to_string() == "3");
    CHECK(Rational(BigInt(-7), BigInt(2)).floor().to_string() == "-4");
    CHECK(Rational(BigInt(1), BigInt(3)).to_double() == doctest::Approx(1.0 / 3.0));
    CHECK(Rational(5).pow(-2).to_string() == "1/25");
}
