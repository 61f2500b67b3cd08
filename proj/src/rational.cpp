#include "hypeq/rational.hpp"

#include <cmath>
#include <stdexcept>

namespace hypeq {

BigInt::BigInt(long long v) {
    if (v == 0) return;
    sign_ = v > 0 ? 1 : -1;
    unsigned long long m = v > 0 ? static_cast<unsigned long long>(v)
                                 : 0ULL - static_cast<unsigned long long>(v);
    while (m) {
        mag_.push_back(static_cast<std::uint32_t>(m & 0xffffffffULL));
        m >>= 32;
    }
}

BigInt BigInt::from_decimal(const std::string& digits) {
    BigInt r;
    BigInt ten(10);
    for (char c : digits) {
        if (c < '0' || c > '9') throw std::invalid_argument("bad decimal digit");
        r = r * ten + BigInt(c - '0');
    }
    return r;
}

bool BigInt::is_one() const { return sign_ == 1 && mag_.size() == 1 && mag_[0] == 1; }

void BigInt::trim() {
    while (!mag_.empty() && mag_.back() == 0) mag_.pop_back();
    if (mag_.empty()) sign_ = 0;
}

BigInt BigInt::operator-() const {
    BigInt r = *this;
    r.sign_ = -r.sign_;
    return r;
}

BigInt BigInt::abs() const {
    BigInt r = *this;
    if (r.sign_ < 0) r.sign_ = 1;
    return r;
}

int BigInt::compare_mag(const std::vector<std::uint32_t>& a,
                        const std::vector<std::uint32_t>& b) {
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    for (size_t i = a.size(); i-- > 0;) {
        if (a[i] != b[i]) return a[i] < b[i] ? -1 : 1;
    }
    return 0;
}

std::vector<std::uint32_t> BigInt::add_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> r;
    r.reserve(std::max(a.size(), b.size()) + 1);
    std::uint64_t carry = 0;
    for (size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        std::uint64_t s = carry;
        if (i < a.size()) s += a[i];
        if (i < b.size()) s += b[i];
        r.push_back(static_cast<std::uint32_t>(s & 0xffffffffULL));
        carry = s >> 32;
    }
    if (carry) r.push_back(static_cast<std::uint32_t>(carry));
    return r;
}

std::vector<std::uint32_t> BigInt::sub_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> r;
    r.reserve(a.size());
    std::int64_t borrow = 0;
    for (size_t i = 0; i < a.size(); ++i) {
        std::int64_t s = static_cast<std::int64_t>(a[i]) - borrow -
                         (i < b.size() ? static_cast<std::int64_t>(b[i]) : 0);
        if (s < 0) {
            s += (1LL << 32);
            borrow = 1;
        } else {
            borrow = 0;
        }
        r.push_back(static_cast<std::uint32_t>(s));
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

std::vector<std::uint32_t> BigInt::mul_mag(const std::vector<std::uint32_t>& a,
                                           const std::vector<std::uint32_t>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<std::uint32_t> r(a.size() + b.size(), 0);
    for (size_t i = 0; i < a.size(); ++i) {
        std::uint64_t carry = 0;
        for (size_t j = 0; j < b.size(); ++j) {
            std::uint64_t cur = r[i + j] +
                                static_cast<std::uint64_t>(a[i]) * b[j] + carry;
            r[i + j] = static_cast<std::uint32_t>(cur & 0xffffffffULL);
            carry = cur >> 32;
        }
        size_t k = i + b.size();
        while (carry) {
            std::uint64_t cur = r[k] + carry;
            r[k] = static_cast<std::uint32_t>(cur & 0xffffffffULL);
            carry = cur >> 32;
            ++k;
        }
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

BigInt operator+(const BigInt& a, const BigInt& b) {
    if (a.sign_ == 0) return b;
    if (b.sign_ == 0) return a;
    BigInt r;
    if (a.sign_ == b.sign_) {
        r.sign_ = a.sign_;
        r.mag_ = BigInt::add_mag(a.mag_, b.mag_);
    } else {
        int c = BigInt::compare_mag(a.mag_, b.mag_);
        if (c == 0) return BigInt();
        if (c > 0) {
            r.sign_ = a.sign_;
            r.mag_ = BigInt::sub_mag(a.mag_, b.mag_);
        } else {
            r.sign_ = b.sign_;
            r.mag_ = BigInt::sub_mag(b.mag_, a.mag_);
        }
    }
    return r;
}

BigInt operator-(const BigInt& a, const BigInt& b) { return a + (-b); }

BigInt operator*(const BigInt& a, const BigInt& b) {
    BigInt r;
    if (a.sign_ == 0 || b.sign_ == 0) return r;
    r.sign_ = a.sign_ * b.sign_;
    r.mag_ = BigInt::mul_mag(a.mag_, b.mag_);
    return r;
}

// Shift-subtract long division on magnitudes.
void BigInt::divmod(const BigInt& a, const BigInt& b, BigInt& q, BigInt& r) {
    if (b.sign_ == 0) throw std::domain_error("BigInt division by zero");
    if (compare_mag(a.mag_, b.mag_) < 0) {
        q = BigInt();
        r = a;
        return;
    }
    size_t bits = a.mag_.size() * 32;
    std::vector<std::uint32_t> quo(a.mag_.size(), 0), rem;
    for (size_t i = bits; i-- > 0;) {
        // rem = rem << 1 | bit_i(a)
        std::uint32_t carry = 0;
        for (size_t j = 0; j < rem.size(); ++j) {
            std::uint32_t next = rem[j] >> 31;
            rem[j] = (rem[j] << 1) | carry;
            carry = next;
        }
        if (carry) rem.push_back(carry);
        std::uint32_t bit = (a.mag_[i / 32] >> (i % 32)) & 1u;
        if (bit) {
            if (rem.empty())
                rem.push_back(1);
            else
                rem[0] |= 1u;
        }
        if (compare_mag(rem, b.mag_) >= 0) {
            rem = sub_mag(rem, b.mag_);
            quo[i / 32] |= (1u << (i % 32));
        }
    }
    q = BigInt();
    q.mag_ = std::move(quo);
    q.trim();
    q.sign_ = q.mag_.empty() ? 0 : a.sign_ * b.sign_;
    r = BigInt();
    r.mag_ = std::move(rem);
    r.trim();
    r.sign_ = r.mag_.empty() ? 0 : a.sign_;
}

BigInt BigInt::divided_by(const BigInt& b) const {
    BigInt q, r;
    divmod(*this, b, q, r);
    return q;
}

BigInt BigInt::gcd(const BigInt& a, const BigInt& b) {
    BigInt x = a.abs(), y = b.abs();
    while (!y.is_zero()) {
        BigInt q, r;
        divmod(x, y, q, r);
        x = y;
        y = r;
    }
    return x;
}

BigInt BigInt::pow(const BigInt& base, unsigned long long e) {
    BigInt r(1), b = base;
    while (e) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

int BigInt::compare(const BigInt& a, const BigInt& b) {
    if (a.sign_ != b.sign_) return a.sign_ < b.sign_ ? -1 : 1;
    int c = compare_mag(a.mag_, b.mag_);
    return a.sign_ >= 0 ? c : -c;
}

bool BigInt::fits_longlong() const {
    if (mag_.size() > 2) return false;
    unsigned long long v = 0;
    for (size_t i = mag_.size(); i-- > 0;) v = (v << 32) | mag_[i];
    return v <= 0x7fffffffffffffffULL;
}

long long BigInt::to_longlong() const {
    unsigned long long v = 0;
    for (size_t i = mag_.size(); i-- > 0;) v = (v << 32) | mag_[i];
    return sign_ < 0 ? -static_cast<long long>(v) : static_cast<long long>(v);
}

double BigInt::to_double() const {
    if (sign_ == 0) return 0.0;
    double v = 0.0;
    size_t top = mag_.size();
    size_t used = top > 3 ? 3 : top;
    for (size_t i = 0; i < used; ++i)
        v = v * 4294967296.0 + static_cast<double>(mag_[top - 1 - i]);
    v = std::ldexp(v, static_cast<int>(32 * (top - used)));
    return sign_ < 0 ? -v : v;
}

std::string BigInt::to_string() const {
    if (sign_ == 0) return "0";
    BigInt v = abs();
    BigInt base(1000000000);
    std::string out;
    while (!v.is_zero()) {
        BigInt q, r;
        divmod(v, base, q, r);
        unsigned long long chunk =
            r.is_zero() ? 0 : static_cast<unsigned long long>(r.to_longlong());
        std::string part = std::to_string(chunk);
        if (!q.is_zero()) part = std::string(9 - part.size(), '0') + part;
        out = part + out;
        v = q;
    }
    if (sign_ < 0) out = "-" + out;
    return out;
}

Rational::Rational(const BigInt& num, const BigInt& den) : num_(num), den_(den) {
    if (den_.is_zero()) throw std::domain_error("rational with zero denominator");
    reduce();
}

void Rational::reduce() {
    if (num_.is_zero()) {
        den_ = BigInt(1);
        return;
    }
    if (den_.is_negative()) {
        num_ = -num_;
        den_ = -den_;
    }
    BigInt g = BigInt::gcd(num_, den_);
    if (!g.is_one()) {
        num_ = num_.divided_by(g);
        den_ = den_.divided_by(g);
    }
}

Rational Rational::from_string(const std::string& text) {
    std::string s = text;
    bool neg = false;
    size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
        neg = s[i] == '-';
        ++i;
    }
    std::string intpart, fracpart, denpart;
    bool in_frac = false, in_den = false;
    for (; i < s.size(); ++i) {
        char c = s[i];
        if (c == '.') {
            if (in_frac || in_den) throw std::invalid_argument("bad number: " + text);
            in_frac = true;
        } else if (c == '/') {
            if (in_den || in_frac) throw std::invalid_argument("bad number: " + text);
            in_den = true;
        } else if (c >= '0' && c <= '9') {
            (in_den ? denpart : in_frac ? fracpart : intpart) += c;
        } else {
            throw std::invalid_argument("bad number: " + text);
        }
    }
    if (intpart.empty() && fracpart.empty())
        throw std::invalid_argument("bad number: " + text);
    BigInt num = BigInt::from_decimal(intpart.empty() ? "0" : intpart);
    BigInt den(1);
    if (!fracpart.empty()) {
        num = num * BigInt::pow(BigInt(10), fracpart.size()) +
              BigInt::from_decimal(fracpart);
        den = BigInt::pow(BigInt(10), fracpart.size());
    }
    if (in_den) {
        if (denpart.empty()) throw std::invalid_argument("bad number: " + text);
        den = den * BigInt::from_decimal(denpart);
    }
    return Rational(neg ? -num : num, den);
}

bool Rational::is_one() const { return num_.is_one() && den_.is_one(); }

Rational Rational::operator-() const {
    Rational r = *this;
    r.num_ = -r.num_;
    return r;
}

Rational operator+(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num_ * b.num_, a.den_ * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero()) throw std::domain_error("rational division by zero");
    return Rational(a.num_ * b.den_, a.den_ * b.num_);
}

Rational Rational::reciprocal() const {
    if (is_zero()) throw std::domain_error("reciprocal of zero");
    return Rational(den_, num_);
}

Rational Rational::pow(long long e) const {
    if (e == 0) return Rational(1);
    bool inv = e < 0;
    unsigned long long m = inv ? static_cast<unsigned long long>(-e)
                               : static_cast<unsigned long long>(e);
    Rational r(BigInt::pow(num_, m), BigInt::pow(den_, m));
    return inv ? r.reciprocal() : r;
}

BigInt Rational::floor() const {
    BigInt q, r;
    BigInt::divmod(num_, den_, q, r);
    if (r.is_zero() || !num_.is_negative()) return q;
    return q - BigInt(1);
}

int Rational::compare(const Rational& a, const Rational& b) {
    return BigInt::compare(a.num_ * b.den_, b.num_ * a.den_);
}

double Rational::to_double() const { return num_.to_double() / den_.to_double(); }

std::string Rational::to_string() const {
    if (den_.is_one()) return num_.to_string();
    return num_.to_string() + "/" + den_.to_string();
}

}  // namespace hypeq
