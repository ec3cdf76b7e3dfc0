#pragma once

#include <gmpxx.h>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace relulab {

using BigInt = mpz_class;

// Exact rational scalar. Always reduced, denominator > 0. All network and
// protocol arithmetic runs on these; sign decisions are never approximate.
class Rational {
public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}
    Rational(int n) : q_(n) {}
    Rational(const BigInt& n) : q_(n) {}
    Rational(long num, long den);
    Rational(const BigInt& num, const BigInt& den);
    explicit Rational(const mpq_class& q);

    // Parses "p/q" or "p" (den defaults to 1). Rejects zero denominators
    // and malformed input.
    static Rational from_string(const std::string& s);

    BigInt num() const { return q_.get_num(); }
    BigInt den() const { return q_.get_den(); }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sgn(q_) == 0; }
    bool is_integer() const { return q_.get_den() == 1; }

    Rational abs() const;
    BigInt floor() const;   // largest integer <= value

    // Serialized form used by every file format: "p/q", denominator always
    // explicit so round-trips are bit-exact and unambiguous.
    std::string to_string() const;
    double to_double() const { return q_.get_d(); }

    friend Rational operator+(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ + b.q_)); }
    friend Rational operator-(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ - b.q_)); }
    friend Rational operator*(const Rational& a, const Rational& b) { return Rational(mpq_class(a.q_ * b.q_)); }
    friend Rational operator/(const Rational& a, const Rational& b);
    Rational operator-() const { return Rational(mpq_class(-q_)); }

    Rational& operator+=(const Rational& b) { q_ += b.q_; return *this; }
    Rational& operator-=(const Rational& b) { q_ -= b.q_; return *this; }
    Rational& operator*=(const Rational& b) { q_ *= b.q_; return *this; }
    Rational& operator/=(const Rational& b);

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }
    friend bool operator<=(const Rational& a, const Rational& b) { return a.q_ <= b.q_; }
    friend bool operator>(const Rational& a, const Rational& b) { return a.q_ > b.q_; }
    friend bool operator>=(const Rational& a, const Rational& b) { return a.q_ >= b.q_; }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

    const mpq_class& raw() const { return q_; }

private:
    mpq_class q_;  // canonical by construction
};

// 2^e for e >= 0.
BigInt pow2(unsigned long e);

// Least common multiple of the denominators of a set of rationals; >= 1.
BigInt common_denominator(const std::vector<Rational>& xs);

}  // namespace relulab
