// Arbitrary-precision integers and rationals.
//
// The symbolic layer works over exact rationals so that constraint residuals
// vanish exactly rather than approximately; doubles appear only in the
// numeric oracle.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hypeq {

// Sign-magnitude big integer, little-endian base 2^32 limbs.
class BigInt {
public:
    BigInt() = default;
    BigInt(long long v);
    static BigInt from_decimal(const std::string& digits);

    bool is_zero() const { return sign_ == 0; }
    bool is_negative() const { return sign_ < 0; }
    bool is_one() const;
    int sign() const { return sign_; }

    BigInt operator-() const;
    BigInt abs() const;

    friend BigInt operator+(const BigInt& a, const BigInt& b);
    friend BigInt operator-(const BigInt& a, const BigInt& b);
    friend BigInt operator*(const BigInt& a, const BigInt& b);

    // Truncated division (quotient rounds toward zero, remainder has the
    // sign of the dividend). b must be nonzero.
    static void divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r);
    BigInt divided_by(const BigInt& b) const;

    static BigInt gcd(const BigInt& a, const BigInt& b);
    static BigInt pow(const BigInt& base, unsigned long long e);

    // -1, 0, +1 as a < b, a == b, a > b.
    static int compare(const BigInt& a, const BigInt& b);
    bool operator==(const BigInt& o) const { return compare(*this, o) == 0; }
    bool operator!=(const BigInt& o) const { return compare(*this, o) != 0; }
    bool operator<(const BigInt& o) const { return compare(*this, o) < 0; }

    bool fits_longlong() const;
    long long to_longlong() const;
    double to_double() const;
    std::string to_string() const;

private:
    int sign_ = 0;
    std::vector<std::uint32_t> mag_;

    static int compare_mag(const std::vector<std::uint32_t>& a,
                           const std::vector<std::uint32_t>& b);
    static std::vector<std::uint32_t> add_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b);
    // requires a >= b
    static std::vector<std::uint32_t> sub_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b);
    static std::vector<std::uint32_t> mul_mag(const std::vector<std::uint32_t>& a,
                                              const std::vector<std::uint32_t>& b);
    void trim();
    friend class Rational;
};

// Reduced rational number: gcd(num, den) = 1, den > 0.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long v) : num_(v), den_(1) {}
    Rational(const BigInt& num, const BigInt& den);
    static Rational from_string(const std::string& text);  // "3", "-3/4", "2.5"

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const;
    bool is_integer() const { return den_.is_one(); }
    bool is_negative() const { return num_.is_negative(); }

    Rational operator-() const;
    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);  // throws on /0

    Rational reciprocal() const;
    Rational pow(long long e) const;
    BigInt floor() const;

    static int compare(const Rational& a, const Rational& b);
    bool operator==(const Rational& o) const { return compare(*this, o) == 0; }
    bool operator!=(const Rational& o) const { return compare(*this, o) != 0; }
    bool operator<(const Rational& o) const { return compare(*this, o) < 0; }

    double to_double() const;
    std::string to_string() const;  // "3", "-3/4"

private:
    BigInt num_, den_;
    void reduce();
};

}  // namespace hypeq
