#pragma once

#include <gmpxx.h>

#include <Eigen/Core>
#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>

#include "fourblock/errors.hpp"

namespace fourblock {

// Arbitrary-precision integer with eager value semantics. The gmpxx expression
// templates are deliberately hidden behind this wrapper so that Eigen
// expressions see a plain arithmetic-like scalar.
class BigInt {
public:
    BigInt() : v_(0) {}
    BigInt(int x) : v_(x) {}
    BigInt(long x) : v_(static_cast<signed long>(x)) {}
    BigInt(long long x) : v_(static_cast<signed long>(x)) {
        static_assert(sizeof(long) == sizeof(long long), "LP64 assumed");
    }
    explicit BigInt(const mpz_class& x) : v_(x) {}
    explicit BigInt(const std::string& digits) : v_(digits) {}

    const mpz_class& raw() const { return v_; }
    mpz_class& raw() { return v_; }

    BigInt operator-() const { return BigInt(mpz_class(-v_)); }
    BigInt& operator+=(const BigInt& o) { v_ += o.v_; return *this; }
    BigInt& operator-=(const BigInt& o) { v_ -= o.v_; return *this; }
    BigInt& operator*=(const BigInt& o) { v_ *= o.v_; return *this; }

    friend BigInt operator+(const BigInt& a, const BigInt& b) { return BigInt(mpz_class(a.v_ + b.v_)); }
    friend BigInt operator-(const BigInt& a, const BigInt& b) { return BigInt(mpz_class(a.v_ - b.v_)); }
    friend BigInt operator*(const BigInt& a, const BigInt& b) { return BigInt(mpz_class(a.v_ * b.v_)); }

    // Exact division; callers guarantee divisibility (Bareiss pivots, gcd scaling).
    friend BigInt operator/(const BigInt& a, const BigInt& b) {
        BigInt q;
        mpz_divexact(q.v_.get_mpz_t(), a.v_.get_mpz_t(), b.v_.get_mpz_t());
        return q;
    }

    friend bool operator==(const BigInt& a, const BigInt& b) { return a.v_ == b.v_; }
    friend bool operator!=(const BigInt& a, const BigInt& b) { return a.v_ != b.v_; }
    friend bool operator<(const BigInt& a, const BigInt& b) { return a.v_ < b.v_; }
    friend bool operator<=(const BigInt& a, const BigInt& b) { return a.v_ <= b.v_; }
    friend bool operator>(const BigInt& a, const BigInt& b) { return a.v_ > b.v_; }
    friend bool operator>=(const BigInt& a, const BigInt& b) { return a.v_ >= b.v_; }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sgn(v_) == 0; }
    bool fits_long() const { return v_.fits_slong_p(); }
    long to_long() const { return v_.get_si(); }
    std::string str() const { return v_.get_str(); }

    friend BigInt abs(const BigInt& a) { return BigInt(mpz_class(::abs(a.v_))); }
    friend BigInt gcd(const BigInt& a, const BigInt& b) { return BigInt(mpz_class(::gcd(a.v_, b.v_))); }
    friend BigInt lcm(const BigInt& a, const BigInt& b) { return BigInt(mpz_class(::lcm(a.v_, b.v_))); }

    // Floor division and the matching nonnegative remainder.
    friend BigInt fdiv(const BigInt& a, const BigInt& b) {
        BigInt q;
        mpz_fdiv_q(q.v_.get_mpz_t(), a.v_.get_mpz_t(), b.v_.get_mpz_t());
        return q;
    }
    friend BigInt fmod(const BigInt& a, const BigInt& b) {
        BigInt r;
        mpz_fdiv_r(r.v_.get_mpz_t(), a.v_.get_mpz_t(), b.v_.get_mpz_t());
        return r;
    }

    friend std::ostream& operator<<(std::ostream& os, const BigInt& x);

    std::size_t hash() const {
        std::size_t h = 1469598103934665603ull;
        for (char c : v_.get_str()) h = (h ^ static_cast<std::size_t>(c)) * 1099511628211ull;
        return h;
    }

private:
    mpz_class v_;
};

// Exact rational, always canonical (reduced, positive denominator).
class Rational {
public:
    Rational() : v_(0) {}
    Rational(int x) : v_(x) {}
    Rational(long x) : v_(static_cast<signed long>(x)) {}
    Rational(const BigInt& x) : v_(x.raw()) {}
    Rational(const BigInt& num, const BigInt& den) : v_(num.raw(), den.raw()) {
        if (sgn(den.raw()) == 0) fail(ErrorCode::Singular, "rational with zero denominator");
        v_.canonicalize();
    }
    explicit Rational(const mpq_class& x) : v_(x) { v_.canonicalize(); }

    const mpq_class& raw() const { return v_; }

    BigInt num() const { return BigInt(mpz_class(v_.get_num())); }
    BigInt den() const { return BigInt(mpz_class(v_.get_den())); }

    Rational operator-() const { return Rational(mpq_class(-v_)); }
    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) fail(ErrorCode::Singular, "rational division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ + b.v_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ - b.v_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.v_ * b.v_)); }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.is_zero()) fail(ErrorCode::Singular, "rational division by zero");
        return Rational(mpq_class(a.v_ / b.v_));
    }

    friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

    int sign() const { return sgn(v_); }
    bool is_zero() const { return sgn(v_) == 0; }
    bool is_integer() const { return v_.get_den() == 1; }

    BigInt floor() const {
        BigInt q;
        mpz_fdiv_q(q.raw().get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return q;
    }
    BigInt ceil() const {
        BigInt q;
        mpz_cdiv_q(q.raw().get_mpz_t(), v_.get_num_mpz_t(), v_.get_den_mpz_t());
        return q;
    }
    // Integer part when the value is integral; errors otherwise.
    BigInt to_integer() const {
        if (!is_integer()) fail(ErrorCode::NotIntegral, "expected integral rational, got " + str());
        return num();
    }

    friend Rational abs(const Rational& a) { return Rational(mpq_class(::abs(a.v_))); }

    // Serialized as "p/q", "/q" omitted for integers.
    std::string str() const;
    static Rational parse(const std::string& text);

    friend std::ostream& operator<<(std::ostream& os, const Rational& x);

    std::size_t hash() const {
        std::size_t h = num().hash();
        return h * 31 + den().hash();
    }

private:
    mpq_class v_;
};

// x mod t for rationals: x - t*floor(x/t), lies in [0, t).
Rational rat_mod(const Rational& x, const Rational& t);

}  // namespace fourblock

namespace Eigen {

template <>
struct NumTraits<fourblock::BigInt> : GenericNumTraits<fourblock::BigInt> {
    using Real = fourblock::BigInt;
    using NonInteger = fourblock::Rational;
    using Nested = fourblock::BigInt;
    using Literal = long;
    enum {
        IsComplex = 0,
        IsInteger = 1,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 4,
        AddCost = 16,
        MulCost = 32,
    };
    static Real epsilon() { return fourblock::BigInt(0); }
    static Real dummy_precision() { return fourblock::BigInt(0); }
    static int digits10() { return 0; }
};

template <>
struct NumTraits<fourblock::Rational> : GenericNumTraits<fourblock::Rational> {
    using Real = fourblock::Rational;
    using NonInteger = fourblock::Rational;
    using Nested = fourblock::Rational;
    using Literal = long;
    enum {
        IsComplex = 0,
        IsInteger = 0,
        IsSigned = 1,
        RequireInitialization = 1,
        ReadCost = 8,
        AddCost = 48,
        MulCost = 64,
    };
    static Real epsilon() { return fourblock::Rational(0); }
    static Real dummy_precision() { return fourblock::Rational(0); }
    static int digits10() { return 0; }
};

}  // namespace Eigen

namespace std {
template <>
struct hash<fourblock::BigInt> {
    size_t operator()(const fourblock::BigInt& x) const { return x.hash(); }
};
template <>
struct hash<fourblock::Rational> {
    size_t operator()(const fourblock::Rational& x) const { return x.hash(); }
};
}  // namespace std
