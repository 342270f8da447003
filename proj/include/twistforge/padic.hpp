#pragma once

#include <compare>
#include <optional>
#include <vector>

#include "twistforge/numbers.hpp"

namespace twistforge {

/// Valuation value: an integer or +infinity. Infinity occurs exactly for the
/// valuation of 0. Ordering places infinity above every integer, and adding
/// any integer to infinity leaves it infinite.
class Val {
  public:
    Val() : finite_(true), v_(0) {}
    Val(long v) : finite_(true), v_(v) {}
    static Val infinity() {
        Val x;
        x.finite_ = false;
        return x;
    }

    bool is_infinite() const { return !finite_; }
    long value() const {
        if (!finite_) throw error("Val: value() on infinity");
        return v_;
    }

    Val operator+(long n) const { return finite_ ? Val(v_ + n) : *this; }
    Val operator-(long n) const { return finite_ ? Val(v_ - n) : *this; }

    friend bool operator==(const Val& a, const Val& b) {
        return a.finite_ == b.finite_ && (!a.finite_ || a.v_ == b.v_);
    }
    friend bool operator<(const Val& a, const Val& b) {
        if (!a.finite_) return false;
        if (!b.finite_) return true;
        return a.v_ < b.v_;
    }
    friend bool operator<=(const Val& a, const Val& b) { return a < b || a == b; }
    friend bool operator>(const Val& a, const Val& b) { return b < a; }
    friend bool operator>=(const Val& a, const Val& b) { return b <= a; }
    friend bool operator==(const Val& a, long b) { return a == Val(b); }
    friend bool operator>=(const Val& a, long b) { return a >= Val(b); }
    friend bool operator<(const Val& a, long b) { return a < Val(b); }

    static Val min(const Val& a, const Val& b) { return a < b ? a : b; }

  private:
    bool finite_;
    long v_;
};

/// v_p of an integer; infinity for 0.
Val valuation(const Bigint& n, const Prime& p);

/// Normalized p-adic valuation of a rational: v_p(num) - v_p(den).
Val valuation(const Rational& x, const Prime& p);

/// Residue in {0, ..., p^k - 1} of a p-adic unit x (v_p(x) = 0), computed as
/// num * den^{-1} mod p^k. Callers holding a non-unit must divide out the
/// power of p first; passing one raises not_a_unit.
Bigint unit_part_mod(const Rational& x, const Prime& p, unsigned k);

/// Residue mod p^k of any x with v_p(x) >= 0 (denominator is a p-unit).
Bigint residue_mod(const Rational& x, const Prime& p, unsigned k);

/// Legendre symbol of a p-adic unit u at an odd prime: +1 iff the residue of
/// u is a nonzero square mod p.
int legendre(const Rational& u, const Prime& p);

/// Whether the residue of a in F_2 lies in the image of the Artin-Schreier
/// map T(x) = x^2 + x. Over F_2 the image is {0}, so this is the parity test
/// a == 0 mod 2. Requires p = 2 and v_2(a) >= 0.
bool artin_schreier_in_image(const Rational& a, const Prime& p);

/// Number of distinct roots of X^3 + c2 X^2 + c1 X + c0 over F_p, counted
/// without multiplicity. Inputs must have v_p >= 0.
int count_cubic_roots_mod_p(const Rational& c2, const Rational& c1, const Rational& c0,
                            const Prime& p);

// ---------------------------------------------------------------------------
// Small F_p polynomial utilities shared by the reduction-type machinery.
// Coefficients are residues in {0, ..., p-1}; index i holds the X^i term.

namespace fp {

using Poly = std::vector<Bigint>;

Bigint norm(const Bigint& a, const Bigint& p);
Poly trim(Poly f, const Bigint& p);
Poly mul(const Poly& a, const Poly& b, const Bigint& p);
Poly mod(Poly a, const Poly& b, const Bigint& p);
Poly gcd(Poly a, Poly b, const Bigint& p);
/// X^p mod f, by binary powering.
Poly xpow_p_mod(const Poly& f, const Bigint& p);
/// Number of distinct roots of f in F_p: deg gcd(X^p - X, f).
int count_roots(const Poly& f, const Bigint& p);
/// Formal derivative.
Poly deriv(const Poly& f, const Bigint& p);

/// Root structure of a monic cubic over F_p.
struct CubicRoots {
    int distinct;              // number of distinct roots in an algebraic closure (1, 2, or 3)
    int rational;              // number of distinct roots in F_p
    std::optional<Bigint> multiple_root;  // the double or triple root, when distinct < 3
};

CubicRoots analyze_cubic(const Bigint& c2, const Bigint& c1, const Bigint& c0, const Bigint& p);

/// Root structure of a quadratic a Y^2 + b Y + c with a != 0 mod p.
struct QuadRoots {
    bool separable;            // distinct roots in an algebraic closure
    int rational;              // distinct roots in F_p (0, 1, or 2)
    std::optional<Bigint> double_root;    // set when not separable
};

QuadRoots analyze_quadratic(const Bigint& a, const Bigint& b, const Bigint& c, const Bigint& p);

}  // namespace fp

}  // namespace twistforge
