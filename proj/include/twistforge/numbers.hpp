#pragma once

#include <gmpxx.h>

#include <string>
#include <utility>

#include "twistforge/errors.hpp"

namespace twistforge {

using Bigint = mpz_class;

/// Exact signed rational, always in lowest terms with positive denominator.
/// Arithmetic never rounds. Backed by GMP's canonicalized mpq.
class Rational {
  public:
    Rational() : q_(0) {}
    Rational(long n) : q_(n) {}
    Rational(const Bigint& n) : q_(n) {}
    Rational(const Bigint& num, const Bigint& den) : q_(num, den) {
        if (den == 0) throw error("Rational: zero denominator");
        q_.canonicalize();
    }
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    /// Parses "123", "-7/3", "0". Throws parse_error on malformed input.
    static Rational parse(const std::string& s);

    const Bigint& num() const { return q_.get_num(); }
    const Bigint& den() const { return q_.get_den(); }
    const mpq_class& raw() const { return q_; }

    bool is_zero() const { return q_ == 0; }
    bool is_integer() const { return q_.get_den() == 1; }
    int sign() const { return sgn(q_); }

    Rational operator-() const { return Rational(mpq_class(-q_)); }
    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw error("Rational: division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend bool operator!=(const Rational& a, const Rational& b) { return a.q_ != b.q_; }
    friend bool operator<(const Rational& a, const Rational& b) { return a.q_ < b.q_; }

    std::string str() const;

  private:
    mpq_class q_;
};

Rational pow_int(const Rational& base, long e);

/// A rational prime p >= 2. Construction checks primality.
struct Prime {
    Bigint p;

    explicit Prime(const Bigint& value);
    explicit Prime(long value) : Prime(Bigint(value)) {}

    bool is_two() const { return p == 2; }
    bool operator==(const Prime& o) const { return p == o.p; }
};

}  // namespace twistforge
