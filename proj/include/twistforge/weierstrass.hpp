#pragma once

#include <array>
#include <optional>
#include <string>

#include "twistforge/padic.hpp"

namespace twistforge {

struct Invariants {
    Rational b2, b4, b6, b8, delta;
};

/// Long Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6
/// with rational coefficients.
struct WeierstrassModel {
    Rational a1, a2, a3, a4, a6;

    Invariants invariants() const;
    Rational discriminant() const { return invariants().delta; }
    bool is_singular() const { return discriminant().is_zero(); }

    bool operator==(const WeierstrassModel& o) const {
        return a1 == o.a1 && a2 == o.a2 && a3 == o.a3 && a4 == o.a4 && a6 == o.a6;
    }

    bool is_integral_at(const Prime& p) const;

    std::string str() const;
};

/// Admissible change of variables (x, y) -> (u^2 x + r, u^3 y + u^2 s x + w),
/// written [u, r, s, w]. u must be nonzero.
struct Isomorphism {
    Rational u{1}, r{0}, s{0}, w{0};

    static Isomorphism identity() { return {}; }
    static Isomorphism scaling(const Rational& u) { return {u, Rational(0), Rational(0), Rational(0)}; }

    bool operator==(const Isomorphism& o) const {
        return u == o.u && r == o.r && s == o.s && w == o.w;
    }

    std::string str() const;
};

/// Coefficients of the model obtained from E via phi. Delta scales by u^-12.
WeierstrassModel apply_isomorphism(const WeierstrassModel& E, const Isomorphism& phi);

/// Composite map: applying the result equals applying phi1 then phi2.
Isomorphism compose(const Isomorphism& phi1, const Isomorphism& phi2);
Isomorphism inverse(const Isomorphism& phi);

// ---------------------------------------------------------------------------
// Valuation vectors.  An entry constrains v(a_i): either an exact value, a
// lower bound, or "the coefficient is zero".  A concrete model's vector has
// every entry exact (or zero).

struct VEntry {
    enum class Kind { AtLeast, Exact, Zero };
    Kind kind = Kind::AtLeast;
    long bound = 0;

    static VEntry at_least(long b) { return {Kind::AtLeast, b}; }
    static VEntry exact(long b) { return {Kind::Exact, b}; }
    static VEntry zero() { return {Kind::Zero, 0}; }

    bool operator==(const VEntry& o) const { return kind == o.kind && bound == o.bound; }
    std::string str() const;
};

/// Optional side constraint attached to a pattern.
struct SideCondition {
    enum class Kind { None, DeltaValuation, A4PlusA6Unit };
    Kind kind = Kind::None;
    long value = 0;

    static SideCondition none() { return {}; }
    static SideCondition delta_valuation(long v) { return {Kind::DeltaValuation, v}; }
    static SideCondition a4_plus_a6_unit() { return {Kind::A4PlusA6Unit, 0}; }

    bool holds(const WeierstrassModel& E, const Prime& p) const;
    std::string str() const;
};

struct ValuationVector {
    std::array<VEntry, 5> e;  // slots for a1, a2, a3, a4, a6

    std::string str() const;
    bool operator==(const ValuationVector& o) const { return e == o.e; }
};

/// Exact valuation vector of a concrete model at p. Zero coefficients become
/// Zero entries; everything else is Exact.
ValuationVector valuation_vector(const WeierstrassModel& E, const Prime& p);

/// Whether the concrete vector V satisfies the pattern: Zero slots require a
/// vanishing coefficient, Exact slots equality, AtLeast slots either a
/// vanishing coefficient or a valuation >= the bound.
bool matches(const ValuationVector& V, const ValuationVector& pattern);

/// Pattern match including the side condition evaluated on the model itself.
bool matches(const WeierstrassModel& E, const Prime& p, const ValuationVector& pattern,
             const SideCondition& side);

// ---------------------------------------------------------------------------
// Quadratic twists.

/// Square class of d in Q_p^* / (Q_p^*)^2, kept as an integer representative.
struct TwistClass {
    Bigint d{1};
    bool canonical = false;

    bool is_trivial() const { return d == 1; }
};

/// Canonical representative of the square class of d at p: v_p(d) in {0, 1},
/// and the unit part reduced to a fixed class representative: 1 or the
/// smallest positive non-residue for odd p, one of {1, 3, 5, 7} for p = 2.
/// Square inputs map to d = 1.
TwistClass canonicalize_twist(const Bigint& d, const Prime& p);

/// Weierstrass model for the quadratic twist of E by d:
///   y^2 = x^3 + d(a1^2 + 4 a2) x^2 + d^2(8 a1 a3 + 16 a4) x + d^3(16 a3^2 + 64 a6).
WeierstrassModel twist_model(const WeierstrassModel& E, const TwistClass& d);
WeierstrassModel twist_model(const WeierstrassModel& E, const Bigint& d);

// ---------------------------------------------------------------------------
// Text formats.

/// Parses a JSON-style list of five integers or exact-fraction strings,
/// e.g. [1,0,0,-1,2] or ["1","0","0","-1/4","2"].
WeierstrassModel parse_ainvs(const std::string& text);
std::string format_ainvs(const WeierstrassModel& E);

}  // namespace twistforge
