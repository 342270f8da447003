#pragma once

#include <string>

#include "twistforge/errors.hpp"

namespace twistforge {

/// Kodaira-Neron symbol. I(0) is good reduction, I(n>0) multiplicative,
/// everything else additive. n is meaningful only for the I and I* families.
struct KodairaType {
    enum class Family { I, II, III, IV, IStar, IVStar, IIIStar, IIStar };

    Family family = Family::I;
    long n = 0;

    static KodairaType I(long n) { return {Family::I, n}; }
    static KodairaType II() { return {Family::II, 0}; }
    static KodairaType III() { return {Family::III, 0}; }
    static KodairaType IV() { return {Family::IV, 0}; }
    static KodairaType IStar(long n) { return {Family::IStar, n}; }
    static KodairaType IVStar() { return {Family::IVStar, 0}; }
    static KodairaType IIIStar() { return {Family::IIIStar, 0}; }
    static KodairaType IIStar() { return {Family::IIStar, 0}; }

    bool operator==(const KodairaType& o) const { return family == o.family && n == o.n; }
    bool operator!=(const KodairaType& o) const { return !(*this == o); }

    bool is_good() const { return family == Family::I && n == 0; }
    bool is_multiplicative() const { return family == Family::I && n > 0; }
    bool is_additive() const { return !is_good() && !is_multiplicative(); }

    /// Compact symbol: "I0", "I5", "II", "III", "IV", "I0*", "I4*", "IV*",
    /// "III*", "II*". Round-trips with parse().
    std::string str() const;
    static KodairaType parse(const std::string& s);
};

/// Number of components of the special fiber over the algebraic closure,
/// counted without multiplicity.
long component_count(const KodairaType& t);

enum class ReductionKind { Good, SplitMultiplicative, NonsplitMultiplicative, Additive };

std::string reduction_str(ReductionKind k);
ReductionKind reduction_parse(const std::string& s);

/// Local data of an elliptic curve at a fixed prime: Kodaira-Neron type,
/// minimal discriminant valuation, conductor exponent, Tamagawa number,
/// component count, and reduction kind.
struct LocalData {
    KodairaType type;
    long delta = 0;
    long f = 0;
    long c = 1;
    long m = 1;
    ReductionKind reduction = ReductionKind::Good;

    bool operator==(const LocalData& o) const {
        return type == o.type && delta == o.delta && f == o.f && c == o.c && m == o.m &&
               reduction == o.reduction;
    }
    bool operator!=(const LocalData& o) const { return !(*this == o); }

    /// Checks the structural constraints: Ogg's relation f = delta - m + 1,
    /// m determined by the type, the reduction kind consistent with the type,
    /// and the per-type Tamagawa bounds. Throws on violation.
    void validate() const;

    std::string str() const;
};

/// Assembles local data from (type, delta, c, reduction); m comes from the
/// type and f from Ogg's formula.
LocalData make_local_data(const KodairaType& t, long delta, long c, ReductionKind red);

}  // namespace twistforge
