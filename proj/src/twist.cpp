#include "twistforge/twist.hpp"

#include <sstream>

namespace twistforge {

RFam rfam_of(const KodairaType& t) {
    using F = KodairaType::Family;
    switch (t.family) {
        case F::I: return t.n == 0 ? RFam::I0 : RFam::In;
        case F::II: return RFam::II;
        case F::III: return RFam::III;
        case F::IV: return RFam::IV;
        case F::IStar: return t.n == 0 ? RFam::IStar0 : RFam::IStarN;
        case F::IVStar: return RFam::IVStar;
        case F::IIIStar: return RFam::IIIStar;
        case F::IIStar: return RFam::IIStar;
    }
    throw error("rfam_of: bad family");
}

namespace {

const char* rfam_name(RFam f) {
    switch (f) {
        case RFam::I0: return "I0";
        case RFam::In: return "In";
        case RFam::II: return "II";
        case RFam::III: return "III";
        case RFam::IV: return "IV";
        case RFam::IStar0: return "I0*";
        case RFam::IStarN: return "In*";
        case RFam::IVStar: return "IV*";
        case RFam::IIIStar: return "III*";
        case RFam::IIStar: return "II*";
    }
    throw error("rfam_name: bad family");
}

using IsoExpr = Rational (*)(const WeierstrassModel&, const Rational&);

struct IsoRule {
    int vd;
    int fam;  // -1 = applies to every type (the default normalizer j = 0)
    int j;
    const char* text[4];
    IsoExpr u, r, s, w;
};

Rational R2(long k) { return Rational(k); }

// clang-format off
const IsoRule kIsoRules[] = {
    // v(d) = 0
    {0, -1, 0, {"2", "0", "a1", "4*a3"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational&) { return E.a1; },
     [](const WeierstrassModel& E, const Rational&) { return R2(4) * E.a3; }},
    {0, (int)RFam::I0, 1, {"2", "0", "a1", "0"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational&) { return E.a1; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); }},
    {0, (int)RFam::I0, 2, {"2", "0", "a1", "4"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational&) { return E.a1; },
     [](const WeierstrassModel&, const Rational&) { return R2(4); }},
    {0, (int)RFam::I0, 3, {"1", "0", "a1", "0"},
     [](const WeierstrassModel&, const Rational&) { return R2(1); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational&) { return E.a1; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); }},
    {0, (int)RFam::I0, 4, {"1", "0", "a1", "8"},
     [](const WeierstrassModel&, const Rational&) { return R2(1); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational&) { return E.a1; },
     [](const WeierstrassModel&, const Rational&) { return R2(8); }},
    {0, (int)RFam::I0, 5, {"1", "0", "0", "4"},
     [](const WeierstrassModel&, const Rational&) { return R2(1); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational&) { return R2(4); }},
    {0, (int)RFam::In, 1, {"1", "0", "a1", "4*a3"},
     [](const WeierstrassModel&, const Rational&) { return R2(1); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational&) { return E.a1; },
     [](const WeierstrassModel& E, const Rational&) { return R2(4) * E.a3; }},
    {0, (int)RFam::IStarN, 1, {"2", "2*a3", "0", "4*a3"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel& E, const Rational&) { return R2(2) * E.a3; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational&) { return R2(4) * E.a3; }},
    {0, (int)RFam::IStarN, 2, {"4", "0", "a1", "0"},
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational&) { return E.a1; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); }},
    {0, (int)RFam::IStarN, 3, {"4", "0", "a1", "4*a3"},
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational&) { return E.a1; },
     [](const WeierstrassModel& E, const Rational&) { return R2(4) * E.a3; }},
    {0, (int)RFam::IIStar, 1, {"2", "a1^4", "a1", "a6"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel& E, const Rational&) { return E.a1 * E.a1 * E.a1 * E.a1; },
     [](const WeierstrassModel& E, const Rational&) { return E.a1; },
     [](const WeierstrassModel& E, const Rational&) { return E.a6; }},
    {0, (int)RFam::IIStar, 2, {"4", "a1^2*d+4*a2*d", "0", "4*a3"},
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel& E, const Rational& d) { return (E.a1 * E.a1 + R2(4) * E.a2) * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational&) { return R2(4) * E.a3; }},

    // v(d) = 1
    {1, -1, 0, {"2", "0", "0", "0"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); }},
    {1, (int)RFam::I0, 1, {"1", "8*a1^2*d", "0", "4*(a6+1)*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(1); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(8) * E.a1 * E.a1 * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(4) * (E.a6 + R2(1)) * d * d; }},
    {1, (int)RFam::I0, 2, {"1", "16*a1^2*d", "0", "4*a6*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(1); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(16) * E.a1 * E.a1 * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(4) * E.a6 * d * d; }},
    {1, (int)RFam::In, 1, {"1", "-4*a3*d", "0", "4*a3*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(1); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(-4) * E.a3 * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(4) * E.a3 * d * d; }},
    {1, (int)RFam::In, 2, {"1", "4*a3*d", "0", "4*a3*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(1); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(4) * E.a3 * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(4) * E.a3 * d * d; }},
    {1, (int)RFam::In, 3, {"1", "-4*a3*d/a1", "0", "8*a4*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(1); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(-4) * E.a3 * d / E.a1; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(8) * E.a4 * d * d; }},
    {1, (int)RFam::In, 4, {"1", "-4*a3*d/a1", "0", "0"},
     [](const WeierstrassModel&, const Rational&) { return R2(1); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(-4) * E.a3 * d / E.a1; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); }},
    {1, (int)RFam::II, 1, {"2", "0", "0", "4*d^3"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational& d) { return R2(4) * d * d * d; }},
    {1, (int)RFam::II, 2, {"2", "8*d", "0", "8*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel&, const Rational& d) { return R2(8) * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational& d) { return R2(8) * d * d; }},
    {1, (int)RFam::II, 3, {"2", "0", "a1-d", "8*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational& d) { return E.a1 - d; },
     [](const WeierstrassModel&, const Rational& d) { return R2(8) * d * d; }},
    {1, (int)RFam::II, 4, {"4", "a2^3*d", "0", "4*d^3"},
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel& E, const Rational& d) { return E.a2 * E.a2 * E.a2 * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational& d) { return R2(4) * d * d * d; }},
    {1, (int)RFam::IStar0, 1, {"2", "4*d^2", "0", "8*a2*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel&, const Rational& d) { return R2(4) * d * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(8) * E.a2 * d * d; }},
    {1, (int)RFam::IStar0, 2, {"2", "16*d^2", "0", "16*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel&, const Rational& d) { return R2(16) * d * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational& d) { return R2(16) * d * d; }},
    {1, (int)RFam::IStar0, 3, {"2", "8*d^2", "0", "16*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel&, const Rational& d) { return R2(8) * d * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational& d) { return R2(16) * d * d; }},
    {1, (int)RFam::IStar0, 4, {"4", "0", "2*a2", "32*d"},
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational&) { return R2(2) * E.a2; },
     [](const WeierstrassModel&, const Rational& d) { return R2(32) * d; }},
    {1, (int)RFam::IStarN, 1, {"2", "2*a3*d", "0", "0"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(2) * E.a3 * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); }},
    {1, (int)RFam::IStarN, 2, {"4", "0", "2*d", "4*a3*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational& d) { return R2(2) * d; },
     [](const WeierstrassModel& E, const Rational& d) { return R2(4) * E.a3 * d * d; }},
    {1, (int)RFam::IStarN, 3, {"4", "16*d", "4", "32*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel&, const Rational& d) { return R2(16) * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel&, const Rational& d) { return R2(32) * d * d; }},
    {1, (int)RFam::IStarN, 4, {"8", "0", "2*d", "0"},
     [](const WeierstrassModel&, const Rational&) { return R2(8); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational& d) { return R2(2) * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); }},
    {1, (int)RFam::IStarN, 5, {"2", "2*a3*d", "0", "4*a4*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(2) * E.a3 * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(4) * E.a4 * d * d; }},
    {1, (int)RFam::IStarN, 6, {"2", "-2*a3*d", "0", "4*a3*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(-2) * E.a3 * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(4) * E.a3 * d * d; }},
    {1, (int)RFam::IStarN, 7, {"2", "2*a3*d", "0", "4*a3*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(2) * E.a3 * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(4) * E.a3 * d * d; }},
    {1, (int)RFam::IStarN, 8, {"4", "2*a3", "4", "8*a3"},
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel& E, const Rational&) { return R2(2) * E.a3; },
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel& E, const Rational&) { return R2(8) * E.a3; }},
    {1, (int)RFam::IStarN, 9, {"8", "2*a3", "4", "8*a3"},
     [](const WeierstrassModel&, const Rational&) { return R2(8); },
     [](const WeierstrassModel& E, const Rational&) { return R2(2) * E.a3; },
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel& E, const Rational&) { return R2(8) * E.a3; }},
    {1, (int)RFam::IVStar, 1, {"2", "4*d^2", "0", "16*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel&, const Rational& d) { return R2(4) * d * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational& d) { return R2(16) * d * d; }},
    {1, (int)RFam::IIIStar, 1, {"2", "2*a3*d", "0", "32*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(2) * E.a3 * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational& d) { return R2(32) * d * d; }},
    {1, (int)RFam::IIIStar, 2, {"2", "2*a3*d", "0", "0"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(2) * E.a3 * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); }},
    {1, (int)RFam::IIIStar, 3, {"4", "0", "0", "0"},
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); }},
    {1, (int)RFam::IIStar, 1, {"2", "2*a3*d+16*d^2", "0", "32*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(2) * E.a3 * d + R2(16) * d * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational& d) { return R2(32) * d * d; }},
    {1, (int)RFam::IIStar, 2, {"2", "2*a3*d", "0", "32*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(2); },
     [](const WeierstrassModel& E, const Rational& d) { return R2(2) * E.a3 * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational& d) { return R2(32) * d * d; }},
    {1, (int)RFam::IIStar, 3, {"4", "0", "0", "0"},
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational&) { return R2(0); }},
    {1, (int)RFam::IIStar, 4, {"4", "a4*d", "0", "32*d^2"},
     [](const WeierstrassModel&, const Rational&) { return R2(4); },
     [](const WeierstrassModel& E, const Rational& d) { return E.a4 * d; },
     [](const WeierstrassModel&, const Rational&) { return R2(0); },
     [](const WeierstrassModel&, const Rational& d) { return R2(32) * d * d; }},
};
// clang-format on

const IsoRule& find_iso_rule(int vd, RFam fam, int j) {
    if (j != 0) {
        for (const auto& r : kIsoRules)
            if (r.vd == vd && r.fam == (int)fam && r.j == j) return r;
        throw error("twist: no normalizing isomorphism for j != 0");
    }
    for (const auto& r : kIsoRules)
        if (r.vd == vd && r.fam == -1 && r.j == 0) return r;
    throw error("twist: default normalizer missing");
}

Isomorphism iso_of(const IsoRule& rule, const WeierstrassModel& E, const Rational& d) {
    return Isomorphism{rule.u(E, d), rule.r(E, d), rule.s(E, d), rule.w(E, d)};
}

// ---------------------------------------------------------------------------
// Condition polynomials P_{R,j}. The n-dependent powers of 2 belong to the
// In and In* entries.

using PolyExpr = Rational (*)(const WeierstrassModel&, const Rational&, long);

struct PolyRule {
    int vd;
    RFam fam;
    int j;
    const char* text;
    PolyExpr f;
};

Rational tp(long e) { return pow_int(Rational(2), e); }  // 2^e

// clang-format off
const PolyRule kPolyRules[] = {
    {0, RFam::In, 1, "2^(n-1)*(d-1)+a6*d",
     [](const WeierstrassModel& E, const Rational& d, long n) { return tp(n - 1) * (d - R2(1)) + E.a6 * d; }},
    {0, RFam::In, 2, "a3^2+2*a6",
     [](const WeierstrassModel& E, const Rational&, long) { return E.a3 * E.a3 + R2(2) * E.a6; }},
    {0, RFam::IStar0, 1, "4*(d-1)+a6*d",
     [](const WeierstrassModel& E, const Rational& d, long) { return R2(4) * (d - R2(1)) + E.a6 * d; }},
    {0, RFam::IStarN, 1, "2^(n+1)*(d-1)+a6",
     [](const WeierstrassModel& E, const Rational& d, long n) { return tp(n + 1) * (d - R2(1)) + E.a6; }},
    {0, RFam::IStarN, 2, "2^(n+2)*(d-1+a2*d)+a3*a4+2*a6+2^(n+1)*a3",
     [](const WeierstrassModel& E, const Rational& d, long n) {
         return tp(n + 2) * (d - R2(1) + E.a2 * d) + E.a3 * E.a4 + R2(2) * E.a6 + tp(n + 1) * E.a3;
     }},
    {0, RFam::IIStar, 1, "48+16*a2*d+4*a4+16*d+a6*d",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return R2(48) + R2(16) * E.a2 * d + R2(4) * E.a4 + R2(16) * d + E.a6 * d;
     }},

    {1, RFam::I0, 1, "4+16*a2+8*a4+4*a6-d-d*a6^2-2*a6*d",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return R2(4) + R2(16) * E.a2 + R2(8) * E.a4 + R2(4) * E.a6 - d - d * E.a6 * E.a6 -
                R2(2) * E.a6 * d;
     }},
    {1, RFam::I0, 2, "a3^2-a6^2*d+4*a6",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return E.a3 * E.a3 - E.a6 * E.a6 * d + R2(4) * E.a6;
     }},
    {1, RFam::In, 1, "a1^2*a3^2+2*a1*a3^2+4*a2*a3^2+4*a3^3-a3^2*d+a3^2+4*a3*a4+4*a6",
     [](const WeierstrassModel& E, const Rational& d, long) {
         Rational a32 = E.a3 * E.a3;
         return E.a1 * E.a1 * a32 + R2(2) * E.a1 * a32 + R2(4) * E.a2 * a32 +
                R2(4) * a32 * E.a3 - a32 * d + a32 + R2(4) * E.a3 * E.a4 + R2(4) * E.a6;
     }},
    {1, RFam::In, 2, "a1*a2*a3^2-a1^2*a3*a4+a1^3*a6-a3^3",
     [](const WeierstrassModel& E, const Rational&, long) {
         return E.a1 * E.a2 * E.a3 * E.a3 - E.a1 * E.a1 * E.a3 * E.a4 +
                E.a1 * E.a1 * E.a1 * E.a6 - E.a3 * E.a3 * E.a3;
     }},
    {1, RFam::In, 3, "a1^2*a3^2-2*a1*a3^2+4*a2*a3^2-4*a3^3-a3^2*d+a3^2-4*a3*a4+4*a6",
     [](const WeierstrassModel& E, const Rational& d, long) {
         Rational a32 = E.a3 * E.a3;
         return E.a1 * E.a1 * a32 - R2(2) * E.a1 * a32 + R2(4) * E.a2 * a32 -
                R2(4) * a32 * E.a3 - a32 * d + a32 - R2(4) * E.a3 * E.a4 + R2(4) * E.a6;
     }},
    {1, RFam::In, 4, "a1*a2*a3^2-a1^3*a4^2*d-a1^2*a3*a4+a1^3*a6-a3^3",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return E.a1 * E.a2 * E.a3 * E.a3 - E.a1 * E.a1 * E.a1 * E.a4 * E.a4 * d -
                E.a1 * E.a1 * E.a3 * E.a4 + E.a1 * E.a1 * E.a1 * E.a6 - E.a3 * E.a3 * E.a3;
     }},
    {1, RFam::II, 1, "a3^2+4*a6-4*d",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return E.a3 * E.a3 + R2(4) * E.a6 - R2(4) * d;
     }},
    {1, RFam::II, 2, "4*a1^2+4*a1*a3+a3^2+16*a2+8*a4+4*a6-4*d+32",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return R2(4) * E.a1 * E.a1 + R2(4) * E.a1 * E.a3 + E.a3 * E.a3 + R2(16) * E.a2 +
                R2(8) * E.a4 + R2(4) * E.a6 - R2(4) * d + R2(32);
     }},
    {1, RFam::IStar0, 1, "a1^2*d^2-4*a2^2*d+2*a1*a3*d+4*a2*d^2+4*d^3+a3^2+4*a4*d+4*a6",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return E.a1 * E.a1 * d * d - R2(4) * E.a2 * E.a2 * d + R2(2) * E.a1 * E.a3 * d +
                R2(4) * E.a2 * d * d + R2(4) * d * d * d + E.a3 * E.a3 + R2(4) * E.a4 * d +
                R2(4) * E.a6;
     }},
    {1, RFam::IStar0, 2, "4*a1^2*d^2+4*a1*a3*d+16*a2*d^2+32*d^3+a3^2+8*a4*d+4*a6-16*d",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return R2(4) * E.a1 * E.a1 * d * d + R2(4) * E.a1 * E.a3 * d + R2(16) * E.a2 * d * d +
                R2(32) * d * d * d + E.a3 * E.a3 + R2(8) * E.a4 * d + R2(4) * E.a6 - R2(16) * d;
     }},
    {1, RFam::IStar0, 3, "a3^2+4*a6-16*d",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return E.a3 * E.a3 + R2(4) * E.a6 - R2(16) * d;
     }},
    {1, RFam::IStar0, 4, "a3^2*d+4*a6*d-64",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return E.a3 * E.a3 * d + R2(4) * E.a6 * d - R2(64);
     }},
    {1, RFam::IStar0, 5, "a4-4*a2",
     [](const WeierstrassModel& E, const Rational&, long) { return E.a4 - R2(4) * E.a2; }},
    {1, RFam::IStarN, 1, "a1^2*a3^2+4*a1*a3^2+4*a2*a3^2+2*a3^3+4*a3^2+8*a3*a4+16*a6",
     [](const WeierstrassModel& E, const Rational&, long) {
         Rational a32 = E.a3 * E.a3;
         return E.a1 * E.a1 * a32 + R2(4) * E.a1 * a32 + R2(4) * E.a2 * a32 +
                R2(2) * a32 * E.a3 + R2(4) * a32 + R2(8) * E.a3 * E.a4 + R2(16) * E.a6;
     }},
    {1, RFam::IStarN, 2, "a3^2*d-a3^2-4*a6",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return E.a3 * E.a3 * d - E.a3 * E.a3 - R2(4) * E.a6;
     }},
    {1, RFam::IStarN, 3, "4*a1+4*a2+a3-4*d",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return R2(4) * E.a1 + R2(4) * E.a2 + E.a3 - R2(4) * d;
     }},
    {1, RFam::IStarN, 4, "a1^2*d+4*a2*d+48*d-16",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return E.a1 * E.a1 * d + R2(4) * E.a2 * d + R2(48) * d - R2(16);
     }},
    {1, RFam::IStarN, 5, "16*a1^2+8*a1*a3+a3^2+64*a2+16*a4+4*a6-64*d+256",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return R2(16) * E.a1 * E.a1 + R2(8) * E.a1 * E.a3 + E.a3 * E.a3 + R2(64) * E.a2 +
                R2(16) * E.a4 + R2(4) * E.a6 - R2(64) * d + R2(256);
     }},
    {1, RFam::IStarN, 6, "a1^2+4*a2-4*d",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return E.a1 * E.a1 + R2(4) * E.a2 - R2(4) * d;
     }},
    {1, RFam::IStarN, 7, "P1-4*a4^2*d",
     [](const WeierstrassModel& E, const Rational& d, long) {
         Rational a32 = E.a3 * E.a3;
         Rational p1 = E.a1 * E.a1 * a32 + R2(4) * E.a1 * a32 + R2(4) * E.a2 * a32 +
                       R2(2) * a32 * E.a3 + R2(4) * a32 + R2(8) * E.a3 * E.a4 + R2(16) * E.a6;
         return p1 - R2(4) * E.a4 * E.a4 * d;
     }},
    {1, RFam::IStarN, 8, "a1^2*a3^2+4*a1*a3^2+4*a2*a3^2+2*a3^3-4*a3^2*d+4*a3^2+8*a3*a4+16*a6",
     [](const WeierstrassModel& E, const Rational& d, long) {
         Rational a32 = E.a3 * E.a3;
         return E.a1 * E.a1 * a32 + R2(4) * E.a1 * a32 + R2(4) * E.a2 * a32 +
                R2(2) * a32 * E.a3 - R2(4) * a32 * d + R2(4) * a32 + R2(8) * E.a3 * E.a4 +
                R2(16) * E.a6;
     }},
    {1, RFam::IStarN, 9, "a1^2*a3^2-4*a1*a3^2+4*a2*a3^2-2*a3^3-4*a3^2*d+4*a3^2-8*a3*a4+16*a6",
     [](const WeierstrassModel& E, const Rational& d, long) {
         Rational a32 = E.a3 * E.a3;
         return E.a1 * E.a1 * a32 - R2(4) * E.a1 * a32 + R2(4) * E.a2 * a32 -
                R2(2) * a32 * E.a3 - R2(4) * a32 * d + R2(4) * a32 - R2(8) * E.a3 * E.a4 +
                R2(16) * E.a6;
     }},
    {1, RFam::IStarN, 10,
     "a1^2*a3^2*d+4*a1*a3^2*d^2+4*a3^2*d^3+4*a2*a3^2*d+8*a3*a4*d^2+16*a6*d^3+2*a3^3-16*a3^2",
     [](const WeierstrassModel& E, const Rational& d, long) {
         Rational a32 = E.a3 * E.a3;
         return E.a1 * E.a1 * a32 * d + R2(4) * E.a1 * a32 * d * d + R2(4) * a32 * d * d * d +
                R2(4) * E.a2 * a32 * d + R2(8) * E.a3 * E.a4 * d * d +
                R2(16) * E.a6 * d * d * d + R2(2) * a32 * E.a3 - R2(16) * a32;
     }},
    {1, RFam::IVStar, 1, "a1^2*d^2+2*a1*a3*d+4*a2*d^2+4*d^3+a3^2+4*a4*d+4*a6-16*d",
     [](const WeierstrassModel& E, const Rational& d, long) {
         return E.a1 * E.a1 * d * d + R2(2) * E.a1 * E.a3 * d + R2(4) * E.a2 * d * d +
                R2(4) * d * d * d + E.a3 * E.a3 + R2(4) * E.a4 * d + R2(4) * E.a6 - R2(16) * d;
     }},
    {1, RFam::IIIStar, 1, "a1^2*a3^2+4*a1*a3^2+4*a2*a3^2+2*a3^3+4*a3^2+8*a3*a4+16*a6",
     [](const WeierstrassModel& E, const Rational&, long) {
         Rational a32 = E.a3 * E.a3;
         return E.a1 * E.a1 * a32 + R2(4) * E.a1 * a32 + R2(4) * E.a2 * a32 +
                R2(2) * a32 * E.a3 + R2(4) * a32 + R2(8) * E.a3 * E.a4 + R2(16) * E.a6;
     }},
    {1, RFam::IIIStar, 2, "P1-256*d",
     [](const WeierstrassModel& E, const Rational& d, long) {
         Rational a32 = E.a3 * E.a3;
         Rational p1 = E.a1 * E.a1 * a32 + R2(4) * E.a1 * a32 + R2(4) * E.a2 * a32 +
                       R2(2) * a32 * E.a3 + R2(4) * a32 + R2(8) * E.a3 * E.a4 + R2(16) * E.a6;
         return p1 - R2(256) * d;
     }},
    {1, RFam::IIStar, 1, "a1^2*a3^2+4*a1*a3^2+4*a2*a3^2+2*a3^3+4*a3^2+8*a3*a4+16*a6-256*d",
     [](const WeierstrassModel& E, const Rational& d, long) {
         Rational a32 = E.a3 * E.a3;
         return E.a1 * E.a1 * a32 + R2(4) * E.a1 * a32 + R2(4) * E.a2 * a32 +
                R2(2) * a32 * E.a3 + R2(4) * a32 + R2(8) * E.a3 * E.a4 + R2(16) * E.a6 -
                R2(256) * d;
     }},
    {1, RFam::IIStar, 2,
     "P1+16*d*(a1^2*a3+4*a1^2*d+2*a1*a3+4*a2*a3+3*a3^2+16*a2*d+24*a3*d+64*d^2+4*a4)",
     [](const WeierstrassModel& E, const Rational& d, long) {
         Rational a32 = E.a3 * E.a3;
         Rational p1 = E.a1 * E.a1 * a32 + R2(4) * E.a1 * a32 + R2(4) * E.a2 * a32 +
                       R2(2) * a32 * E.a3 + R2(4) * a32 + R2(8) * E.a3 * E.a4 + R2(16) * E.a6 -
                       R2(256) * d;
         Rational inner = E.a1 * E.a1 * E.a3 + R2(4) * E.a1 * E.a1 * d + R2(2) * E.a1 * E.a3 +
                          R2(4) * E.a2 * E.a3 + R2(3) * a32 + R2(16) * E.a2 * d +
                          R2(24) * E.a3 * d + R2(64) * d * d + R2(4) * E.a4;
         return p1 + R2(16) * d * inner;
     }},
    {1, RFam::IIStar, 3, "a1^2*a4^2+8*a1*a3*a4+4*a2*a4^2+a4^3+16*a3^2+16*a4^2+64*a6-1024*d",
     [](const WeierstrassModel& E, const Rational& d, long) {
         Rational a42 = E.a4 * E.a4;
         return E.a1 * E.a1 * a42 + R2(8) * E.a1 * E.a3 * E.a4 + R2(4) * E.a2 * a42 +
                a42 * E.a4 + R2(16) * E.a3 * E.a3 + R2(16) * a42 + R2(64) * E.a6 - R2(1024) * d;
     }},
    {1, RFam::IIStar, 4, "a1^2+4*a2+3*a4",
     [](const WeierstrassModel& E, const Rational&, long) {
         return E.a1 * E.a1 + R2(4) * E.a2 + R2(3) * E.a4;
     }},
};
// clang-format on

}  // namespace

Rational evaluate_prj(const KodairaType& R, int v_d, int j, const StronglyMinimalModel& S,
                      const TwistClass& d) {
    RFam fam = rfam_of(R);
    for (const auto& r : kPolyRules)
        if (r.vd == v_d && r.fam == fam && r.j == j) return r.f(S.model, Rational(d.d), R.n);
    throw unknown_polynomial("evaluate_prj: no polynomial for this (type, v(d), j)");
}

namespace {

// ---------------------------------------------------------------------------
// Model-selection rules: which normalizer applies, the valuation pattern the
// result must satisfy, and the resulting type.

struct TwistCtx {
    const StronglyMinimalModel* S;
    TwistClass dc;
    Rational d;
    long dm4 = 0;  // canonical unit class mod 4 (v(d) = 0 only)
    long n = 0;
    int vd = 0;

    const WeierstrassModel& E() const { return S->model; }
    Val v(const Rational& x) const { return valuation(x, S->p); }
    Val vP(int j) const {
        return valuation(evaluate_prj(S->type, vd, j, *S, dc), S->p);
    }
};

struct SelectRule {
    int vd;
    RFam fam;
    const char* when;
    bool (*guard)(const TwistCtx&);
    int j;
    ValuationVector (*pattern)(long n);
    SideCondition side;
    const char* to;
    KodairaType (*target)(long n);
};

VEntry AL(long b) { return VEntry::at_least(b); }
VEntry EX(long b) { return VEntry::exact(b); }
VEntry ZZ() { return VEntry::zero(); }
using VV = ValuationVector;
using KT = KodairaType;

// Guard helpers kept terse; v1 is v(a1) and so on.
bool dm1(const TwistCtx& c) { return c.dm4 == 1; }
bool dm3(const TwistCtx& c) { return c.dm4 == 3; }
Val v1(const TwistCtx& c) { return c.v(c.E().a1); }
Val v3(const TwistCtx& c) { return c.v(c.E().a3); }
Val v4(const TwistCtx& c) { return c.v(c.E().a4); }
Val v6(const TwistCtx& c) { return c.v(c.E().a6); }

// Binary table branches are always "= k" against ">= k+1"; anything below k
// means the inputs violate the row's hypotheses.
bool branch_eq(Val v, long k) {
    if (v < k) throw table_mismatch("twist: condition valuation below its proven bound");
    return v == Val(k);
}

// clang-format off
const SelectRule kSelectV0[] = {
    {0, RFam::I0, "d=1(4), v(a1)=0", [](const TwistCtx& c) { return dm1(c) && v1(c) == 0; }, 1,
     [](long) { return VV{{EX(0), AL(0), ZZ(), AL(0), AL(0)}}; }, SideCondition::none(),
     "I0", [](long) { return KT::I(0); }},
    {0, RFam::I0, "d=1(4), v(a1)>=1", [](const TwistCtx& c) { return dm1(c) && v1(c) >= 1; }, 2,
     [](long) { return VV{{AL(1), AL(1), EX(0), AL(0), AL(0)}}; }, SideCondition::none(),
     "I0", [](long) { return KT::I(0); }},
    {0, RFam::I0, "d=3(4), v(a1)=0, v(a4)=0", [](const TwistCtx& c) { return dm3(c) && v1(c) == 0 && v4(c) == 0; }, 3,
     [](long) { return VV{{EX(1), EX(1), ZZ(), EX(4), AL(7)}}; }, SideCondition::none(),
     "I4*", [](long) { return KT::IStar(4); }},
    {0, RFam::I0, "d=3(4), v(a1)=0, v(a4)>=1", [](const TwistCtx& c) { return dm3(c) && v1(c) == 0 && v4(c) >= 1; }, 4,
     [](long) { return VV{{EX(1), EX(1), EX(4), EX(4), AL(7)}}; }, SideCondition::none(),
     "I4*", [](long) { return KT::IStar(4); }},
    {0, RFam::I0, "d=3(4), v(a1)>=1", [](const TwistCtx& c) { return dm3(c) && v1(c) >= 1; }, 5,
     [](long) { return VV{{ZZ(), AL(2), EX(3), AL(4), EX(5)}}; }, SideCondition::none(),
     "II*", [](long) { return KT::IIStar(); }},

    {0, RFam::In, "d=1(4), n odd", [](const TwistCtx& c) { return dm1(c) && c.n % 2 == 1; }, 0,
     [](long n) { return VV{{EX(0), AL(0), EX((n + 1) / 2), AL((n + 1) / 2), EX(n)}}; }, SideCondition::none(),
     "In", [](long n) { return KT::I(n); }},
    {0, RFam::In, "d=1(4), n even", [](const TwistCtx& c) { return dm1(c) && c.n % 2 == 0; }, 0,
     [](long n) { return VV{{EX(0), AL(0), AL((n + 2) / 2), EX(n / 2), AL(n + 1)}}; }, SideCondition::none(),
     "In", [](long n) { return KT::I(n); }},
    {0, RFam::In, "d=3(4), n odd", [](const TwistCtx& c) { return dm3(c) && c.n % 2 == 1; }, 1,
     [](long n) { return VV{{EX(1), EX(1), EX((n + 7) / 2), AL((n + 9) / 2), AL(n + 7)}}; }, SideCondition::none(),
     "I(n+4)*", [](long n) { return KT::IStar(n + 4); }},
    {0, RFam::In, "d=3(4), n even", [](const TwistCtx& c) { return dm3(c) && c.n % 2 == 0; }, 1,
     [](long n) { return VV{{EX(1), EX(1), AL((n + 8) / 2), EX((n + 8) / 2), AL(n + 7)}}; }, SideCondition::none(),
     "I(n+4)*", [](long n) { return KT::IStar(n + 4); }},

    {0, RFam::II, "v(a3)>=2", [](const TwistCtx& c) { return v3(c) >= 2; }, 0,
     [](long) { return VV{{AL(1), AL(1), AL(2), AL(1), EX(1)}}; }, SideCondition::none(),
     "II", [](long) { return KT::II(); }},
    {0, RFam::II, "v(a3)=1, d=1(4)", [](const TwistCtx& c) { return v3(c) == 1 && dm1(c); }, 0,
     [](long) { return VV{{AL(1), AL(1), EX(1), AL(1), EX(1)}}; }, SideCondition::none(),
     "II", [](long) { return KT::II(); }},
    {0, RFam::II, "v(a3)=1, d=3(4), v(a4)=1", [](const TwistCtx& c) { return v3(c) == 1 && dm3(c) && v4(c) == 1; }, 0,
     [](long) { return VV{{AL(1), AL(1), EX(1), EX(1), AL(2)}}; }, SideCondition::none(),
     "III", [](long) { return KT::III(); }},
    {0, RFam::II, "v(a3)=1, d=3(4), v(a4)>=2", [](const TwistCtx& c) { return v3(c) == 1 && dm3(c) && v4(c) >= 2; }, 0,
     [](long) { return VV{{AL(1), AL(1), EX(1), AL(2), AL(2)}}; }, SideCondition::none(),
     "IV", [](long) { return KT::IV(); }},

    {0, RFam::III, "d=1(4)", [](const TwistCtx& c) { return dm1(c); }, 0,
     [](long) { return VV{{AL(1), AL(1), AL(1), EX(1), AL(2)}}; }, SideCondition::none(),
     "III", [](long) { return KT::III(); }},
    {0, RFam::III, "d=3(4), v(a3)=1", [](const TwistCtx& c) { return dm3(c) && v3(c) == 1; }, 0,
     [](long) { return VV{{AL(1), AL(1), EX(1), EX(1), EX(1)}}; }, SideCondition::none(),
     "II", [](long) { return KT::II(); }},
    {0, RFam::III, "d=3(4), v(a3)>=2", [](const TwistCtx& c) { return dm3(c) && v3(c) >= 2; }, 0,
     [](long) { return VV{{AL(1), AL(1), AL(2), EX(1), AL(2)}}; }, SideCondition::none(),
     "III", [](long) { return KT::III(); }},

    {0, RFam::IV, "d=3(4)", [](const TwistCtx& c) { return dm3(c); }, 0,
     [](long) { return VV{{AL(1), AL(1), EX(1), AL(2), EX(1)}}; }, SideCondition::none(),
     "II", [](long) { return KT::II(); }},
    {0, RFam::IV, "d=1(4)", [](const TwistCtx& c) { return dm1(c); }, 0,
     [](long) { return VV{{AL(1), AL(1), EX(1), AL(2), AL(2)}}; }, SideCondition::none(),
     "IV", [](long) { return KT::IV(); }},

    {0, RFam::IStar0, "d=1(4)", [](const TwistCtx& c) { return dm1(c); }, 0,
     [](long) { return VV{{AL(1), AL(1), AL(2), AL(3), EX(3)}}; }, SideCondition::none(),
     "I0*", [](long) { return KT::IStar(0); }},
    {0, RFam::IStar0, "d=3(4), v(a3)>=3", [](const TwistCtx& c) { return dm3(c) && v3(c) >= 3; }, 0,
     [](long) { return VV{{AL(1), AL(1), AL(3), AL(3), EX(3)}}; }, SideCondition::none(),
     "I0*", [](long) { return KT::IStar(0); }},
    {0, RFam::IStar0, "d=3(4), v(a3)=2, v(a1+a2)=1",
     [](const TwistCtx& c) { return dm3(c) && v3(c) == 2 && c.v(c.E().a1 + c.E().a2) == 1; }, 0,
     [](long) { return VV{{AL(1), EX(1), EX(2), AL(3), AL(4)}}; }, SideCondition::none(),
     "I1*", [](long) { return KT::IStar(1); }},
    {0, RFam::IStar0, "d=3(4), v(a3)=2, v(a1+a2)>=2",
     [](const TwistCtx& c) { return dm3(c) && v3(c) == 2 && c.v(c.E().a1 + c.E().a2) >= 2; }, 0,
     [](long) { return VV{{AL(1), AL(2), EX(2), AL(3), AL(4)}}; }, SideCondition::none(),
     "IV*", [](long) { return KT::IVStar(); }},

    {0, RFam::IStarN, "d=1(4), n odd", [](const TwistCtx& c) { return dm1(c) && c.n % 2 == 1; }, 0,
     [](long n) { return VV{{AL(1), EX(1), EX((n + 3) / 2), AL((n + 5) / 2), AL(n + 3)}}; }, SideCondition::none(),
     "In*", [](long n) { return KT::IStar(n); }},
    {0, RFam::IStarN, "d=1(4), n even", [](const TwistCtx& c) { return dm1(c) && c.n % 2 == 0; }, 0,
     [](long n) { return VV{{AL(1), EX(1), AL((n + 4) / 2), EX((n + 4) / 2), AL(n + 3)}}; }, SideCondition::none(),
     "In*", [](long n) { return KT::IStar(n); }},
    {0, RFam::IStarN, "d=3(4), n=1", [](const TwistCtx& c) { return dm3(c) && c.n == 1; }, 0,
     [](long) { return VV{{AL(1), AL(1), EX(2), AL(3), EX(3)}}; }, SideCondition::none(),
     "I0*", [](long) { return KT::IStar(0); }},
    {0, RFam::IStarN, "d=3(4), n=2, v(a1)=1", [](const TwistCtx& c) { return dm3(c) && c.n == 2 && v1(c) == 1; }, 0,
     [](long) { return VV{{EX(1), AL(2), AL(3), EX(3), AL(6)}}; }, SideCondition::none(),
     "III*", [](long) { return KT::IIIStar(); }},
    {0, RFam::IStarN, "d=3(4), n even, v(a1)>=2",
     [](const TwistCtx& c) { return dm3(c) && c.n % 2 == 0 && v1(c) >= 2; }, 0,
     [](long n) { return VV{{AL(2), EX(1), AL((n + 4) / 2), AL((n + 4) / 2), AL(n + 3)}}; }, SideCondition::none(),
     "In*", [](long n) { return KT::IStar(n); }},
    {0, RFam::IStarN, "d=3(4), n=3, v(a1)=1", [](const TwistCtx& c) { return dm3(c) && c.n == 3 && v1(c) == 1; }, 0,
     [](long) { return VV{{EX(1), AL(2), EX(3), AL(4), EX(5)}}; }, SideCondition::none(),
     "II*", [](long) { return KT::IIStar(); }},
    {0, RFam::IStarN, "d=3(4), n>=3 odd, v(a1)>=2",
     [](const TwistCtx& c) { return dm3(c) && c.n >= 3 && c.n % 2 == 1 && v1(c) >= 2; }, 1,
     [](long n) { return VV{{ZZ(), EX(1), EX((n + 3) / 2), AL((n + 5) / 2), AL(n + 3)}}; }, SideCondition::none(),
     "In*", [](long n) { return KT::IStar(n); }},
    {0, RFam::IStarN, "d=3(4), n=4, v(a1)=1", [](const TwistCtx& c) { return dm3(c) && c.n == 4 && v1(c) == 1; }, 2,
     [](long) { return VV{{EX(0), AL(0), ZZ(), AL(0), AL(0)}}; }, SideCondition::a4_plus_a6_unit(),
     "I0", [](long) { return KT::I(0); }},
    {0, RFam::IStarN, "d=3(4), n>=5 odd, v(a1)=1",
     [](const TwistCtx& c) { return dm3(c) && c.n >= 5 && c.n % 2 == 1 && v1(c) == 1; }, 3,
     [](long n) { return VV{{EX(0), AL(0), EX((n - 3) / 2), AL((n - 3) / 2), EX(n - 4)}}; }, SideCondition::none(),
     "I(n-4)", [](long n) { return KT::I(n - 4); }},
    {0, RFam::IStarN, "d=3(4), n>=6 even, v(a1)=1",
     [](const TwistCtx& c) { return dm3(c) && c.n >= 6 && c.n % 2 == 0 && v1(c) == 1; }, 3,
     [](long n) { return VV{{EX(0), AL(0), AL((n - 2) / 2), EX((n - 4) / 2), AL(n - 3)}}; }, SideCondition::none(),
     "I(n-4)", [](long n) { return KT::I(n - 4); }},

    {0, RFam::IVStar, "d=1(4)", [](const TwistCtx& c) { return dm1(c); }, 0,
     [](long) { return VV{{AL(1), AL(2), EX(2), AL(3), AL(4)}}; }, SideCondition::none(),
     "IV*", [](long) { return KT::IVStar(); }},
    {0, RFam::IVStar, "d=3(4)", [](const TwistCtx& c) { return dm3(c); }, 0,
     [](long) { return VV{{AL(1), AL(1), EX(2), AL(3), EX(3)}}; }, SideCondition::none(),
     "I0*", [](long) { return KT::IStar(0); }},

    {0, RFam::IIIStar, "v(a1)>=2 or d=1(4)", [](const TwistCtx& c) { return v1(c) >= 2 || dm1(c); }, 0,
     [](long) { return VV{{AL(2), AL(2), AL(3), EX(3), AL(5)}}; }, SideCondition::none(),
     "III*", [](long) { return KT::IIIStar(); }},
    {0, RFam::IIIStar, "v(a1)=1, d=3(4)", [](const TwistCtx& c) { return v1(c) == 1 && dm3(c); }, 0,
     [](long) { return VV{{EX(1), EX(1), AL(3), EX(3), AL(5)}}; }, SideCondition::none(),
     "I2*", [](long) { return KT::IStar(2); }},

    {0, RFam::IIStar, "d=1(4)", [](const TwistCtx& c) { return dm1(c); }, 0,
     [](long) { return VV{{AL(1), AL(2), AL(3), AL(4), EX(5)}}; }, SideCondition::none(),
     "II*", [](long) { return KT::IIStar(); }},
    {0, RFam::IIStar, "d=3(4), v(a1)=1, v(a3)=3",
     [](const TwistCtx& c) { return dm3(c) && v1(c) == 1 && v3(c) == 3; }, 0,
     [](long) { return VV{{EX(1), EX(1), EX(3), AL(4), AL(6)}}; }, SideCondition::none(),
     "I3*", [](long) { return KT::IStar(3); }},
    {0, RFam::IIStar, "d=3(4), v(a1)=1, v(a3)>=4",
     [](const TwistCtx& c) { return dm3(c) && v1(c) == 1 && v3(c) >= 4; }, 1,
     [](long) { return VV{{EX(1), EX(1), EX(3), AL(4), AL(6)}}; }, SideCondition::none(),
     "I3*", [](long) { return KT::IStar(3); }},
    {0, RFam::IIStar, "d=3(4), v(a1)>=2, v(a3)=3",
     [](const TwistCtx& c) { return dm3(c) && v1(c) >= 2 && v3(c) == 3; }, 2,
     [](long) { return VV{{ZZ(), AL(2), EX(0), AL(0), AL(0)}}; }, SideCondition::none(),
     "I0", [](long) { return KT::I(0); }},
    {0, RFam::IIStar, "d=3(4), v(a1)>=2, v(a3)>=4",
     [](const TwistCtx& c) { return dm3(c) && v1(c) >= 2 && v3(c) >= 4; }, 0,
     [](long) { return VV{{AL(2), AL(2), AL(4), AL(4), EX(5)}}; }, SideCondition::none(),
     "II*", [](long) { return KT::IIStar(); }},
};

const SelectRule kSelectV1[] = {
    {1, RFam::I0, "v(a1)=0, v(a6)=0", [](const TwistCtx& c) { return v1(c) == 0 && v6(c) == 0; }, 1,
     [](long) { return VV{{ZZ(), EX(1), AL(6), EX(6), AL(11)}}; }, SideCondition::none(),
     "I8*", [](long) { return KT::IStar(8); }},
    {1, RFam::I0, "v(a1)=0, v(a6)>=1", [](const TwistCtx& c) { return v1(c) == 0 && v6(c) >= 1; }, 2,
     [](long) { return VV{{ZZ(), EX(1), AL(6), EX(6), AL(11)}}; }, SideCondition::none(),
     "I8*", [](long) { return KT::IStar(8); }},
    {1, RFam::I0, "v(a1)>=1", [](const TwistCtx& c) { return v1(c) >= 1; }, 0,
     [](long) { return VV{{ZZ(), AL(1), ZZ(), AL(2), EX(1)}}; }, SideCondition::none(),
     "II", [](long) { return KT::II(); }},

    {1, RFam::In, "n odd, v(P1)=n+3", [](const TwistCtx& c) { return c.n % 2 == 1 && branch_eq(c.vP(1), c.n + 3); }, 1,
     [](long n) { return VV{{ZZ(), EX(1), EX((n + 11) / 2), AL((n + 13) / 2), AL(n + 11)}}; }, SideCondition::none(),
     "I(n+8)*", [](long n) { return KT::IStar(n + 8); }},
    {1, RFam::In, "n odd, v(P1)>=n+4", [](const TwistCtx& c) { return c.n % 2 == 1; }, 2,
     [](long n) { return VV{{ZZ(), EX(1), EX((n + 11) / 2), AL((n + 13) / 2), AL(n + 11)}}; }, SideCondition::none(),
     "I(n+8)*", [](long n) { return KT::IStar(n + 8); }},
    {1, RFam::In, "n even, v(P2)=n+1", [](const TwistCtx& c) { return c.n % 2 == 0 && branch_eq(c.vP(2), c.n + 1); }, 3,
     [](long n) { return VV{{ZZ(), EX(1), ZZ(), EX((n + 12) / 2), AL(n + 11)}}; }, SideCondition::none(),
     "I(n+8)*", [](long n) { return KT::IStar(n + 8); }},
    {1, RFam::In, "n even, v(P2)>=n+2", [](const TwistCtx& c) { return c.n % 2 == 0; }, 4,
     [](long n) { return VV{{ZZ(), EX(1), ZZ(), EX((n + 12) / 2), AL(n + 11)}}; }, SideCondition::none(),
     "I(n+8)*", [](long n) { return KT::IStar(n + 8); }},

    {1, RFam::II, "v(a3)=1", [](const TwistCtx& c) { return v3(c) == 1; }, 0,
     [](long) { return VV{{ZZ(), AL(1), ZZ(), AL(3), EX(3)}}; }, SideCondition::none(),
     "I0*", [](long) { return KT::IStar(0); }},
    {1, RFam::II, "v(a3)>=2, v(a1)=1, v(a4)=1",
     [](const TwistCtx& c) { return v3(c) >= 2 && v1(c) == 1 && v4(c) == 1; }, 1,
     [](long) { return VV{{ZZ(), EX(1), EX(3), EX(3), AL(5)}}; }, SideCondition::none(),
     "I2*", [](long) { return KT::IStar(2); }},
    {1, RFam::II, "v(a3)>=2, v(a1)=1, v(a4)>=2, v(P1)=4",
     [](const TwistCtx& c) { return v3(c) >= 2 && v1(c) == 1 && v4(c) >= 2 && branch_eq(c.vP(1), 4); }, 2,
     [](long) { return VV{{ZZ(), EX(1), EX(3), AL(4), AL(6)}}; }, SideCondition::none(),
     "I3*", [](long) { return KT::IStar(3); }},
    {1, RFam::II, "v(a3)>=2, v(a1)=1, v(a4)>=2, v(P1)>=5",
     [](const TwistCtx& c) { return v3(c) >= 2 && v1(c) == 1 && v4(c) >= 2; }, 3,
     [](long) { return VV{{AL(2), EX(1), EX(3), AL(4), AL(6)}}; }, SideCondition::none(),
     "I3*", [](long) { return KT::IStar(3); }},
    {1, RFam::II, "v(a3)>=2, v(a1)>=2, v(a4)=1",
     [](const TwistCtx& c) { return v3(c) >= 2 && v1(c) >= 2 && v4(c) == 1; }, 1,
     [](long) { return VV{{ZZ(), AL(2), EX(3), EX(3), AL(5)}}; }, SideCondition::none(),
     "III*", [](long) { return KT::IIIStar(); }},
    {1, RFam::II, "v(a3)>=2, v(a1)>=2, v(a4)>=2, v(a3^2+4a6-4d)=4",
     [](const TwistCtx& c) { return v3(c) >= 2 && v1(c) >= 2 && v4(c) >= 2 && branch_eq(c.vP(1), 4); }, 1,
     [](long) { return VV{{ZZ(), AL(2), EX(3), AL(4), EX(5)}}; }, SideCondition::none(),
     "II*", [](long) { return KT::IIStar(); }},
    {1, RFam::II, "v(a3)>=2, v(a1)>=2, v(a4)>=2, v(a3^2+4a6-4d)>=5",
     [](const TwistCtx& c) { return v3(c) >= 2 && v1(c) >= 2 && v4(c) >= 2; }, 4,
     [](long) { return VV{{ZZ(), AL(1), EX(0), AL(0), AL(0)}}; }, SideCondition::none(),
     "I0", [](long) { return KT::I(0); }},

    {1, RFam::III, "v(a3)=1", [](const TwistCtx& c) { return v3(c) == 1; }, 0,
     [](long) { return VV{{ZZ(), AL(1), ZZ(), AL(3), EX(3)}}; }, SideCondition::none(),
     "I0*", [](long) { return KT::IStar(0); }},
    {1, RFam::III, "v(a3)>=2, v(a1)=1", [](const TwistCtx& c) { return v3(c) >= 2 && v1(c) == 1; }, 0,
     [](long) { return VV{{ZZ(), EX(1), ZZ(), EX(3), AL(5)}}; }, SideCondition::none(),
     "I2*", [](long) { return KT::IStar(2); }},
    {1, RFam::III, "v(a3)>=2, v(a1)>=2", [](const TwistCtx& c) { return v3(c) >= 2 && v1(c) >= 2; }, 0,
     [](long) { return VV{{ZZ(), AL(2), ZZ(), EX(3), AL(5)}}; }, SideCondition::none(),
     "III*", [](long) { return KT::IIIStar(); }},

    {1, RFam::IV, "", [](const TwistCtx&) { return true; }, 0,
     [](long) { return VV{{ZZ(), AL(1), ZZ(), AL(3), EX(3)}}; }, SideCondition::none(),
     "I0*", [](long) { return KT::IStar(0); }},

    {1, RFam::IStar0, "v(a1)=1, v(a3)=2", [](const TwistCtx& c) { return v1(c) == 1 && v3(c) == 2; }, 1,
     [](long) { return VV{{ZZ(), EX(1), AL(4), EX(4), AL(7)}}; }, SideCondition::none(),
     "I4*", [](long) { return KT::IStar(4); }},
    {1, RFam::IStar0, "v(a1)=1, v(a3)>=3, v(P2)=6",
     [](const TwistCtx& c) { return v1(c) == 1 && v3(c) >= 3 && branch_eq(c.vP(2), 6); }, 2,
     [](long) { return VV{{ZZ(), EX(1), EX(4), AL(5), AL(8)}}; }, SideCondition::none(),
     "I5*", [](long) { return KT::IStar(5); }},
    {1, RFam::IStar0, "v(a1)=1, v(a3)>=3, v(P2)>=7",
     [](const TwistCtx& c) { return v1(c) == 1 && v3(c) >= 3; }, 3,
     [](long) { return VV{{ZZ(), EX(1), EX(4), AL(5), AL(8)}}; }, SideCondition::none(),
     "I5*", [](long) { return KT::IStar(5); }},
    {1, RFam::IStar0, "v(a1)>=2, v(a3)=2", [](const TwistCtx& c) { return v1(c) >= 2 && v3(c) == 2; }, 0,
     [](long) { return VV{{ZZ(), AL(2), ZZ(), AL(5), EX(5)}}; }, SideCondition::none(),
     "II*", [](long) { return KT::IIStar(); }},
    {1, RFam::IStar0, "v(a1)>=2, v(a3)>=3, v(a3^2d+4a6d-64)=7",
     [](const TwistCtx& c) { return v1(c) >= 2 && v3(c) >= 3 && branch_eq(c.vP(4), 7); }, 4,
     [](long) { return VV{{AL(1), AL(1), EX(1), AL(1), EX(1)}}; }, SideCondition::none(),
     "II", [](long) { return KT::II(); }},
    {1, RFam::IStar0, "v(a1)>=2, v(a3)>=3, v(P4)>=8, v(a4-4a2)=3",
     [](const TwistCtx& c) { return v1(c) >= 2 && v3(c) >= 3 && branch_eq(c.vP(5), 3); }, 4,
     [](long) { return VV{{AL(1), AL(1), EX(1), EX(1), AL(2)}}; }, SideCondition::none(),
     "III", [](long) { return KT::III(); }},
    {1, RFam::IStar0, "v(a1)>=2, v(a3)>=3, v(P4)>=8, v(a4-4a2)>=4",
     [](const TwistCtx& c) { return v1(c) >= 2 && v3(c) >= 3; }, 4,
     [](long) { return VV{{AL(1), AL(1), EX(1), AL(2), AL(2)}}; }, SideCondition::none(),
     "IV", [](long) { return KT::IV(); }},

    {1, RFam::IStarN, "n=1, v(a1)=1", [](const TwistCtx& c) { return c.n == 1 && v1(c) == 1; }, 1,
     [](long) { return VV{{ZZ(), EX(1), ZZ(), EX(4), AL(7)}}; }, SideCondition::none(),
     "I4*", [](long) { return KT::IStar(4); }},
    {1, RFam::IStarN, "n=1, v(a1)>=2", [](const TwistCtx& c) { return c.n == 1 && v1(c) >= 2; }, 1,
     [](long) { return VV{{ZZ(), AL(3), ZZ(), EX(4), EX(5)}}; }, SideCondition::none(),
     "II*", [](long) { return KT::IIStar(); }},
    {1, RFam::IStarN, "n=2, v(a1)>=2, v(a3)=3",
     [](const TwistCtx& c) { return c.n == 2 && v1(c) >= 2 && v3(c) == 3; }, 2,
     [](long) { return VV{{EX(1), AL(1), EX(2), EX(1), EX(1)}}; }, SideCondition::none(),
     "II", [](long) { return KT::II(); }},
    {1, RFam::IStarN, "n=2, v(a1)>=2, v(a3)>=4",
     [](const TwistCtx& c) { return c.n == 2 && v1(c) >= 2 && v3(c) >= 4; }, 2,
     [](long) { return VV{{EX(1), AL(1), AL(3), EX(1), AL(2)}}; }, SideCondition::none(),
     "III", [](long) { return KT::III(); }},
    {1, RFam::IStarN, "n=3, v(a1)>=2", [](const TwistCtx& c) { return c.n == 3 && v1(c) >= 2; }, 2,
     [](long) { return VV{{EX(1), AL(1), EX(2), AL(2), EX(1)}}; }, SideCondition::none(),
     "II", [](long) { return KT::II(); }},
    {1, RFam::IStarN, "n=4, v(a1)>=2, v(P3)=4",
     [](const TwistCtx& c) { return c.n == 4 && v1(c) >= 2 && branch_eq(c.vP(3), 4); }, 3,
     [](long) { return VV{{EX(1), AL(1), EX(2), AL(3), EX(3)}}; }, SideCondition::none(),
     "I0*", [](long) { return KT::IStar(0); }},
    {1, RFam::IStarN, "n=4, v(a1)>=2, v(P3)>=5, v(P4)=5",
     [](const TwistCtx& c) { return c.n == 4 && v1(c) >= 2 && branch_eq(c.vP(4), 5); }, 3,
     [](long) { return VV{{EX(1), EX(1), EX(2), AL(3), AL(4)}}; }, SideCondition::none(),
     "I1*", [](long) { return KT::IStar(1); }},
    {1, RFam::IStarN, "n=4, v(a1)>=2, v(P3)>=5, v(P4)>=6",
     [](const TwistCtx& c) { return c.n == 4 && v1(c) >= 2; }, 3,
     [](long) { return VV{{EX(1), AL(2), EX(2), AL(3), AL(4)}}; }, SideCondition::none(),
     "IV*", [](long) { return KT::IVStar(); }},
    {1, RFam::IStarN, "n=5, v(a1)>=2", [](const TwistCtx& c) { return c.n == 5 && v1(c) >= 2; }, 2,
     [](long) { return VV{{EX(1), AL(1), EX(3), AL(3), EX(3)}}; }, SideCondition::none(),
     "I0*", [](long) { return KT::IStar(0); }},
    {1, RFam::IStarN, "n=6, v(a1)>=2, v(a1^2+4a2-4d)>=5",
     [](const TwistCtx& c) { return c.n == 6 && v1(c) >= 2 && c.vP(6) >= 5; }, 2,
     [](long) { return VV{{EX(1), AL(2), AL(4), EX(3), AL(5)}}; }, SideCondition::none(),
     "III*", [](long) { return KT::IIIStar(); }},
    {1, RFam::IStarN, "n=7, v(a1)>=2, v(a1^2+4a2-4d)>=5",
     [](const TwistCtx& c) { return c.n == 7 && v1(c) >= 2 && c.vP(6) >= 5; }, 2,
     [](long) { return VV{{EX(1), AL(2), EX(4), AL(4), EX(5)}}; }, SideCondition::none(),
     "II*", [](long) { return KT::IIStar(); }},
    {1, RFam::IStarN, "n=8, v(a1)>=2, v(a1^2+4a2-4d)>=5",
     [](const TwistCtx& c) { return c.n == 8 && v1(c) >= 2 && c.vP(6) >= 5; }, 4,
     [](long) { return VV{{EX(0), AL(0), ZZ(), EX(0), AL(1)}}; }, SideCondition::none(),
     "I0", [](long) { return KT::I(0); }},
    {1, RFam::IStarN, "n>=2, v(a1)=1, n even, v(P1)=n+7",
     [](const TwistCtx& c) { return c.n >= 2 && v1(c) == 1 && c.n % 2 == 0 && branch_eq(c.vP(1), c.n + 7); }, 5,
     [](long n) { return VV{{ZZ(), EX(1), EX((n + 8) / 2), EX((n + 8) / 2), AL(n + 7)}}; }, SideCondition::none(),
     "I(n+4)*", [](long n) { return KT::IStar(n + 4); }},
    {1, RFam::IStarN, "n>=2, v(a1)=1, n even, v(P1)>=n+8",
     [](const TwistCtx& c) { return c.n >= 2 && v1(c) == 1 && c.n % 2 == 0; }, 1,
     [](long n) { return VV{{ZZ(), EX(1), ZZ(), EX((n + 8) / 2), AL(n + 7)}}; }, SideCondition::none(),
     "I(n+4)*", [](long n) { return KT::IStar(n + 4); }},
    {1, RFam::IStarN, "n>=2, v(a1)=1, n odd, v(P8)=n+7",
     [](const TwistCtx& c) { return c.n >= 2 && v1(c) == 1 && c.n % 2 == 1 && branch_eq(c.vP(8), c.n + 7); }, 6,
     [](long n) { return VV{{ZZ(), EX(1), EX((n + 7) / 2), AL((n + 9) / 2), AL(n + 7)}}; }, SideCondition::none(),
     "I(n+4)*", [](long n) { return KT::IStar(n + 4); }},
    {1, RFam::IStarN, "n>=2, v(a1)=1, n odd, v(P8)>=n+8",
     [](const TwistCtx& c) { return c.n >= 2 && v1(c) == 1 && c.n % 2 == 1; }, 7,
     [](long n) { return VV{{ZZ(), EX(1), EX((n + 7) / 2), AL((n + 9) / 2), AL(n + 7)}}; }, SideCondition::none(),
     "I(n+4)*", [](long n) { return KT::IStar(n + 4); }},
    {1, RFam::IStarN, "n>=6 even, v(a1)>=2, v(a1^2+4a2-4d)=4",
     [](const TwistCtx& c) { return c.n >= 6 && c.n % 2 == 0 && v1(c) >= 2 && branch_eq(c.vP(6), 4); }, 2,
     [](long n) { return VV{{EX(1), EX(1), AL((n + 2) / 2), EX(n / 2), AL(n - 1)}}; }, SideCondition::none(),
     "I(n-4)*", [](long n) { return KT::IStar(n - 4); }},
    {1, RFam::IStarN, "n>=7 odd, v(a1)>=2, v(a1^2+4a2-4d)=4",
     [](const TwistCtx& c) { return c.n >= 7 && c.n % 2 == 1 && v1(c) >= 2 && branch_eq(c.vP(6), 4); }, 8,
     [](long n) { return VV{{EX(1), EX(1), EX((n - 1) / 2), AL((n + 1) / 2), AL(n - 1)}}; }, SideCondition::none(),
     "I(n-4)*", [](long n) { return KT::IStar(n - 4); }},
    {1, RFam::IStarN, "n>=9 odd, v(a1)>=2, v(a1^2+4a2-4d)>=5",
     [](const TwistCtx& c) { return c.n >= 9 && c.n % 2 == 1 && v1(c) >= 2 && c.vP(6) >= 5; }, 9,
     [](long n) { return VV{{EX(0), AL(0), EX((n - 7) / 2), AL((n - 7) / 2), EX(n - 8)}}; }, SideCondition::none(),
     "I(n-8)", [](long n) { return KT::I(n - 8); }},
    {1, RFam::IStarN, "n>=10 even, v(a1)>=2, v(a1^2+4a2-4d)>=5",
     [](const TwistCtx& c) { return c.n >= 10 && c.n % 2 == 0 && v1(c) >= 2 && c.vP(6) >= 5; }, 9,
     [](long n) { return VV{{EX(0), AL(0), AL((n - 6) / 2), EX((n - 8) / 2), AL(n - 6)}}; }, SideCondition::none(),
     "I(n-8)", [](long n) { return KT::I(n - 8); }},

    {1, RFam::IVStar, "v(a1)=1", [](const TwistCtx& c) { return v1(c) == 1; }, 1,
     [](long) { return VV{{ZZ(), EX(1), EX(4), EX(4), AL(7)}}; }, SideCondition::none(),
     "I4*", [](long) { return KT::IStar(4); }},
    {1, RFam::IVStar, "v(a1)>=2", [](const TwistCtx& c) { return v1(c) >= 2; }, 0,
     [](long) { return VV{{ZZ(), AL(3), ZZ(), AL(5), EX(5)}}; }, SideCondition::none(),
     "II*", [](long) { return KT::IIStar(); }},

    {1, RFam::IIIStar, "v(a1)=1, v(P1)=9",
     [](const TwistCtx& c) { return v1(c) == 1 && branch_eq(c.vP(1), 9); }, 1,
     [](long) { return VV{{ZZ(), EX(1), EX(5), EX(5), AL(9)}}; }, SideCondition::none(),
     "I6*", [](long) { return KT::IStar(6); }},
    {1, RFam::IIIStar, "v(a1)=1, v(P1)>=10", [](const TwistCtx& c) { return v1(c) == 1; }, 2,
     [](long) { return VV{{ZZ(), EX(1), ZZ(), EX(5), AL(9)}}; }, SideCondition::none(),
     "I6*", [](long) { return KT::IStar(6); }},
    {1, RFam::IIIStar, "v(a1)>=2, v(a3)=3",
     [](const TwistCtx& c) { return v1(c) >= 2 && v3(c) == 3; }, 3,
     [](long) { return VV{{ZZ(), AL(1), ZZ(), EX(1), EX(1)}}; }, SideCondition::none(),
     "II", [](long) { return KT::II(); }},
    {1, RFam::IIIStar, "v(a1)>=2, v(a3)>=4",
     [](const TwistCtx& c) { return v1(c) >= 2 && v3(c) >= 4; }, 3,
     [](long) { return VV{{ZZ(), AL(1), ZZ(), EX(1), AL(2)}}; }, SideCondition::none(),
     "III", [](long) { return KT::III(); }},

    {1, RFam::IIStar, "v(a1)=1, v(P1)=10",
     [](const TwistCtx& c) { return v1(c) == 1 && branch_eq(c.vP(1), 10); }, 1,
     [](long) { return VV{{ZZ(), EX(1), EX(5), AL(6), AL(10)}}; }, SideCondition::none(),
     "I7*", [](long) { return KT::IStar(7); }},
    {1, RFam::IIStar, "v(a1)=1, v(P1)>=11", [](const TwistCtx& c) { return v1(c) == 1; }, 2,
     [](long) { return VV{{ZZ(), EX(1), EX(5), AL(6), AL(10)}}; }, SideCondition::none(),
     "I7*", [](long) { return KT::IStar(7); }},
    {1, RFam::IIStar, "v(a1)>=2, v(a3)=3",
     [](const TwistCtx& c) { return v1(c) >= 2 && v3(c) == 3; }, 3,
     [](long) { return VV{{ZZ(), AL(1), ZZ(), AL(2), EX(1)}}; }, SideCondition::none(),
     "II", [](long) { return KT::II(); }},
    {1, RFam::IIStar, "v(a1)>=2, v(a3)>=4, v(P3)=12",
     [](const TwistCtx& c) { return v1(c) >= 2 && v3(c) >= 4 && branch_eq(c.vP(3), 12); }, 4,
     [](long) { return VV{{ZZ(), AL(1), EX(2), AL(3), EX(3)}}; }, SideCondition::none(),
     "I0*", [](long) { return KT::IStar(0); }},
    {1, RFam::IIStar, "v(a1)>=2, v(a3)>=4, v(P3)>=13, v(P4)=4",
     [](const TwistCtx& c) { return v1(c) >= 2 && v3(c) >= 4 && branch_eq(c.vP(4), 4); }, 4,
     [](long) { return VV{{ZZ(), EX(1), EX(2), AL(3), AL(4)}}; }, SideCondition::none(),
     "I1*", [](long) { return KT::IStar(1); }},
    {1, RFam::IIStar, "v(a1)>=2, v(a3)>=4, v(P3)>=13, v(P4)>=5",
     [](const TwistCtx& c) { return v1(c) >= 2 && v3(c) >= 4; }, 4,
     [](long) { return VV{{ZZ(), AL(2), EX(2), AL(3), AL(4)}}; }, SideCondition::none(),
     "IV*", [](long) { return KT::IVStar(); }},
};
// clang-format on

const SelectRule* select_rule(const TwistCtx& c) {
    RFam fam = rfam_of(c.S->type);
    const SelectRule* begin = c.vd == 0 ? std::begin(kSelectV0) : std::begin(kSelectV1);
    const SelectRule* end = c.vd == 0 ? std::end(kSelectV0) : std::end(kSelectV1);
    for (const SelectRule* r = begin; r != end; ++r)
        if (r->fam == fam && r->guard(c)) return r;
    return nullptr;
}

TwistCtx make_ctx(const StronglyMinimalModel& S, const TwistClass& d) {
    if (!d.canonical) throw error("twist: d must be canonical at p");
    TwistCtx c;
    c.S = &S;
    c.dc = d;
    c.d = Rational(d.d);
    c.vd = valuation(d.d, S.p).value();
    if (c.vd != 0 && c.vd != 1) throw error("twist: canonical d must have v(d) in {0,1}");
    c.n = S.type.n;
    if (S.p.is_two() && c.vd == 0) {
        Bigint m = d.d % 4;
        if (m < 0) m += 4;
        c.dm4 = m.get_si();
    }
    return c;
}

}  // namespace

std::pair<StronglyMinimalModel, Isomorphism> twist_strongly_minimal(const StronglyMinimalModel& S,
                                                                    const TwistClass& d) {
    const Prime& p = S.p;
    WeierstrassModel Ed = twist_model(S.model, d);

    if (!p.is_two()) {
        // Reduce to y^2 = x^3 + a2 d x^2 + a4 d^2 x + a6 d^3 first.
        Isomorphism phi = Isomorphism::scaling(Rational(2));
        WeierstrassModel F = apply_isomorphism(Ed, phi);
        long vd = valuation(d.d, p).value();
        RFam fam = rfam_of(S.type);
        if (vd == 1 &&
            (fam == RFam::IStar0 || fam == RFam::IStarN || fam == RFam::IVStar ||
             fam == RFam::IIIStar || fam == RFam::IIStar)) {
            Isomorphism down = Isomorphism::scaling(Rational(p.p));
            F = apply_isomorphism(F, down);
            phi = compose(phi, down);
            if (fam == RFam::IStarN) {
                long n = S.type.n;
                long target = (n + 3 + (n % 2 == 0 ? 1 : 0)) / 2;
                long guard = n + 4;
                while (valuation(F.a4, p) < target) {
                    if (guard-- < 0)
                        throw internal_loop_bound("twist_strongly_minimal: no convergence");
                    Isomorphism t{Rational(1),
                                  (pow_int(Rational(p.p), target) - F.a4) /
                                      (Rational(2) * F.a2),
                                  Rational(0), Rational(0)};
                    F = apply_isomorphism(F, t);
                    phi = compose(phi, t);
                }
            }
        }
        auto match = classify(F, p);
        if (!match)
            throw table_mismatch("twist_strongly_minimal: twisted model " + F.str() +
                                 " is not strongly minimal");
        StronglyMinimalModel out{F, p, match->type, match->id};
        return {{out}, phi};
    }

    TwistCtx c = make_ctx(S, d);
    const SelectRule* rule = select_rule(c);
    if (!rule)
        throw table_mismatch("twist_strongly_minimal: no rule for " + S.model.str() +
                             " of type " + S.type.str());
    Isomorphism phi = iso_of(find_iso_rule(c.vd, rule->fam, rule->j), S.model, c.d);
    WeierstrassModel F = apply_isomorphism(Ed, phi);
    if (!matches(F, p, rule->pattern(c.n), rule->side))
        throw table_mismatch(std::string("twist_strongly_minimal: pattern assertion failed for ") +
                             rfam_name(rule->fam) + " rule '" + rule->when + "' on " + F.str());
    auto match = classify(F, p);
    if (!match || match->type != rule->target(c.n))
        throw table_mismatch(std::string("twist_strongly_minimal: rule '") + rule->when +
                             "' produced an unexpected row");
    StronglyMinimalModel out{F, p, match->type, match->id};
    return {{out}, phi};
}

namespace {

KodairaType odd_twist_type(const KodairaType& t, int vd) {
    if (vd == 0) return t;
    using F = KodairaType::Family;
    switch (t.family) {
        case F::I: return t.n == 0 ? KodairaType::IStar(0) : KodairaType::IStar(t.n);
        case F::II: return KodairaType::IVStar();
        case F::III: return KodairaType::IIIStar();
        case F::IV: return KodairaType::IIStar();
        case F::IStar: return t.n == 0 ? KodairaType::I(0) : KodairaType::I(t.n);
        case F::IVStar: return KodairaType::II();
        case F::IIIStar: return KodairaType::III();
        case F::IIStar: return KodairaType::IV();
    }
    throw error("odd_twist_type: bad family");
}

LocalData base_data(const StronglyMinimalModel& S) { return local_data_from_tables(S); }

}  // namespace

TwistLocalData twist_data_odd(const StronglyMinimalModel& S, const TwistClass& d) {
    if (S.p.is_two()) throw odd_prime_required("twist_data_odd: p must be odd");
    if (!d.canonical) throw error("twist_data_odd: d must be canonical");
    const Prime& p = S.p;
    const WeierstrassModel& E = S.model;
    Rational dr{d.d};
    int vd = static_cast<int>(valuation(d.d, p).value());
    long n = S.type.n;
    Rational pr{p.p};

    KodairaType td = odd_twist_type(S.type, vd);
    long cd;
    ReductionKind redd = td.is_good()
                             ? ReductionKind::Good
                             : (td.is_multiplicative() ? ReductionKind::NonsplitMultiplicative
                                                       : ReductionKind::Additive);
    RFam fam = rfam_of(S.type);
    switch (fam) {
        case RFam::I0:
            if (vd == 0) {
                cd = 1;
            } else {
                cd = 1 + count_cubic_roots_mod_p(E.a2 * dr / pr, E.a4 * dr * dr / (pr * pr),
                                                 E.a6 * dr * dr * dr / (pr * pr * pr), p);
            }
            break;
        case RFam::In: {
            if (vd == 0) {
                bool split = legendre(E.a2 * dr, p) == 1;
                cd = split ? n : 2 - (n % 2);
                redd = split ? ReductionKind::SplitMultiplicative
                             : ReductionKind::NonsplitMultiplicative;
            } else {
                int sym = n % 2 == 1 ? legendre(dr * E.a6 / pow_int(pr, n + 1), p)
                                     : legendre(-(E.a6 / pow_int(pr, n)) / E.a2, p);
                cd = sym == 1 ? 4 : 2;
            }
            break;
        }
        case RFam::II:
            cd = vd == 0 ? 1 : (legendre(dr * E.a6 / (pr * pr), p) == 1 ? 3 : 1);
            break;
        case RFam::III: cd = 2; break;
        case RFam::IV:
            cd = vd == 0 ? (legendre(dr * E.a6 / (pr * pr), p) == 1 ? 3 : 1) : 1;
            break;
        case RFam::IStar0: cd = vd == 0 ? tamagawa_from_row(S) : 1; break;
        case RFam::IStarN: {
            if (vd == 0) {
                int sym = n % 2 == 1 ? legendre(dr * E.a6 / pow_int(pr, n + 3), p)
                                     : legendre(-(E.a6 / pow_int(pr, n + 2)) / E.a2, p);
                cd = sym == 1 ? 4 : 2;
            } else {
                bool split = legendre(dr * E.a2 / (pr * pr), p) == 1;
                cd = split ? n : 2 - (n % 2);
                redd = split ? ReductionKind::SplitMultiplicative
                             : ReductionKind::NonsplitMultiplicative;
            }
            break;
        }
        case RFam::IVStar:
            cd = vd == 0 ? (legendre(dr * E.a6 / pow_int(pr, 4), p) == 1 ? 3 : 1) : 1;
            break;
        case RFam::IIIStar: cd = 2; break;
        case RFam::IIStar:
            cd = vd == 0 ? 1 : (legendre(dr * E.a6 / pow_int(pr, 6), p) == 1 ? 3 : 1);
            break;
        default: throw error("twist_data_odd: bad family");
    }

    auto [F, phi] = twist_strongly_minimal(S, d);
    if (F.type != td)
        throw table_mismatch("twist_data_odd: model route type " + F.type.str() +
                             " disagrees with table type " + td.str());
    long delta_d = valuation(F.model.discriminant(), p).value();

    TwistLocalData out{base_data(S), make_local_data(td, delta_d, cd, redd), d, p,
                       TwistPath::TableFast};
    return out;
}

namespace {

// Attainable (delta, f) pairs per type over Q_2, in source order.
std::vector<std::pair<long, long>> delta_f_candidates(const KodairaType& t) {
    using F = KodairaType::Family;
    long n = t.n;
    switch (t.family) {
        case F::I: return n == 0 ? std::vector<std::pair<long, long>>{{0, 0}}
                                 : std::vector<std::pair<long, long>>{{n, 1}};
        case F::II: return {{4, 4}, {6, 6}, {7, 7}};
        case F::III: return {{4, 3}, {6, 5}, {9, 8}, {8, 7}};
        case F::IV: return {{4, 2}};
        case F::IStar:
            if (n == 0) return {{8, 4}, {9, 5}, {10, 6}};
            if (n == 1) return {{8, 3}};
            if (n == 2) return {{10, 4}, {13, 7}, {12, 6}};
            if (n == 3) return {{11, 4}, {12, 5}};
            return {{8 + n, 4}, {10 + n, 6}};
        case F::IVStar: return {{8, 2}};
        case F::IIIStar: return {{10, 3}, {12, 5}, {15, 8}, {14, 7}};
        case F::IIStar: return {{11, 3}, {12, 4}, {14, 6}};
    }
    throw error("delta_f_candidates: bad type");
}

// An odd twist preserves the minimal discriminant valuation mod 12, and per
// type the attainable values fall in distinct classes mod 12, which pins the
// twisted pair down exactly.
std::pair<long, long> resolve_delta_f(const KodairaType& t, long delta_base) {
    std::optional<std::pair<long, long>> hit;
    for (auto cand : delta_f_candidates(t)) {
        if (((cand.first - delta_base) % 12 + 12) % 12 == 0) {
            if (hit) throw table_mismatch("resolve_delta_f: congruence class not unique");
            hit = cand;
        }
    }
    if (!hit) throw table_mismatch("resolve_delta_f: no candidate matches mod 12");
    return *hit;
}

struct FastOut {
    KodairaType type;
    long cd;
    ReductionKind red;
};

// Hardcoded unit-twist rows for Q_2 (v(d) = 0): twisted type, Tamagawa
// number, and reduction kind from coefficient conditions alone.
FastOut q2_fast_rows(const TwistCtx& c) {
    const StronglyMinimalModel& S = *c.S;
    const WeierstrassModel& E = S.model;
    const Rational& d = c.d;
    long n = c.n;
    const Prime& p = S.p;
    auto vv = [&](const Rational& x) { return valuation(x, p); };
    long cbase = tamagawa_from_row(S);
    auto additive = [](KodairaType t, long cd) {
        return FastOut{t, cd, ReductionKind::Additive};
    };

    switch (rfam_of(S.type)) {
        case RFam::I0: {
            if (c.dm4 == 1) return {KodairaType::I(0), 1, ReductionKind::Good};
            if (v1(c) == 0) {
                Bigint r = residue_mod(E.a6, p, 2);
                long cd = (r == 1 || r == 2) ? 2 : 4;
                return additive(KodairaType::IStar(4), cd);
            }
            return additive(KodairaType::IIStar(), 1);
        }
        case RFam::In: {
            if (c.dm4 == 1) {
                bool split = !branch_eq(vv(d - Rational(1) + Rational(4) * E.a2), 2);
                return {KodairaType::I(n), split ? n : 2 - (n % 2),
                        split ? ReductionKind::SplitMultiplicative
                              : ReductionKind::NonsplitMultiplicative};
            }
            bool low = n % 2 == 1 ? branch_eq(c.vP(1), n + 1) : branch_eq(c.vP(2), n + 2);
            return additive(KodairaType::IStar(n + 4), low ? 2 : 4);
        }
        case RFam::II: {
            if (vv(E.a3) >= 2 || c.dm4 == 1) return additive(KodairaType::II(), 1);
            if (vv(E.a4) == 1) return additive(KodairaType::III(), 2);
            bool low = branch_eq(vv(d * E.a6 + d - Rational(1)), 2);
            return additive(KodairaType::IV(), low ? 1 : 3);
        }
        case RFam::III: {
            if (c.dm4 == 3 && vv(E.a3) == 1) return additive(KodairaType::II(), 1);
            return additive(KodairaType::III(), 2);
        }
        case RFam::IV: {
            if (c.dm4 == 3) return additive(KodairaType::II(), 1);
            bool low = branch_eq(vv(d * E.a6 + d - Rational(1)), 2);
            return additive(KodairaType::IV(), low ? 1 : 3);
        }
        case RFam::IStar0: {
            if (c.dm4 == 1) return additive(KodairaType::IStar(0), cbase);
            if (vv(E.a3) >= 3) {
                bool low = branch_eq(vv(E.a1 + E.a2), 1);
                return additive(KodairaType::IStar(0), low ? 1 : 2);
            }
            bool low = branch_eq(c.vP(1), 4);
            if (vv(E.a1 + E.a2) == 1) return additive(KodairaType::IStar(1), low ? 2 : 4);
            return additive(KodairaType::IVStar(), low ? 1 : 3);
        }
        case RFam::IStarN: {
            if (c.dm4 == 1) {
                if (n % 2 == 1)
                    return additive(KodairaType::IStar(n), branch_eq(c.vP(1), n + 3) ? 2 : 4);
                return additive(KodairaType::IStar(n), branch_eq(vv(E.a6), n + 3) ? 2 : 4);
            }
            if (n == 1)
                return additive(KodairaType::IStar(0), v1(c) >= 2 ? 1 : 2);
            if (n == 2 && v1(c) == 1) return additive(KodairaType::IIIStar(), 2);
            if (n % 2 == 0 && v1(c) >= 2) {
                bool low = branch_eq(vv(E.a3 * E.a3 + Rational(2) * E.a6), n + 4);
                return additive(KodairaType::IStar(n), low ? 2 : 4);
            }
            if (n == 3 && v1(c) == 1) return additive(KodairaType::IIStar(), 1);
            if (n % 2 == 1 && v1(c) >= 2) {
                bool low = branch_eq(c.vP(2), n + 4);
                return additive(KodairaType::IStar(n), low ? 2 : 4);
            }
            if (n == 4) return {KodairaType::I(0), 1, ReductionKind::Good};
            // n >= 5, v(a1) = 1
            bool low = branch_eq(vv(d - Rational(1) + E.a2 * d), 2);
            bool split = !low;
            return {KodairaType::I(n - 4), split ? n - 4 : 2 - (n % 2),
                    split ? ReductionKind::SplitMultiplicative
                          : ReductionKind::NonsplitMultiplicative};
        }
        case RFam::IVStar: {
            if (c.dm4 == 1) {
                bool low = branch_eq(vv(Rational(4) * d - Rational(4) + E.a6), 4);
                return additive(KodairaType::IVStar(), low ? 1 : 3);
            }
            return additive(KodairaType::IStar(0), v1(c) == 1 ? 1 : 2);
        }
        case RFam::IIIStar: {
            if (v1(c) >= 2 || c.dm4 == 1) return additive(KodairaType::IIIStar(), 2);
            bool low = branch_eq(vv(E.a3 * E.a3 + Rational(2) * E.a6), 6);
            return additive(KodairaType::IStar(2), low ? 2 : 4);
        }
        case RFam::IIStar: {
            if (c.dm4 == 1) return additive(KodairaType::IIStar(), 1);
            if (v1(c) == 1) {
                bool low = v3(c) == 3
                               ? branch_eq(vv(Rational(16) * d - Rational(16) + E.a6 * d), 6)
                               : branch_eq(c.vP(1), 6);
                return additive(KodairaType::IStar(3), low ? 2 : 4);
            }
            if (v3(c) == 3) return {KodairaType::I(0), 1, ReductionKind::Good};
            return additive(KodairaType::IIStar(), 1);
        }
    }
    throw error("q2_fast_rows: bad family");
}

}  // namespace

TwistLocalData twist_data_q2(const StronglyMinimalModel& S, const TwistClass& d) {
    if (!S.p.is_two()) throw char2_required("twist_data_q2: p must be 2");
    TwistCtx c = make_ctx(S, d);
    if (c.vd == 1) {
        TwistLocalData out = twist_data_model_derived(S, d);
        return out;
    }
    LocalData base = base_data(S);
    FastOut fo = q2_fast_rows(c);
    auto [delta_d, f_d] = resolve_delta_f(fo.type, base.delta);
    LocalData twisted = make_local_data(fo.type, delta_d, fo.cd, fo.red);
    if (twisted.f != f_d) throw table_mismatch("twist_data_q2: conductor mismatch");
    return {base, twisted, d, S.p, TwistPath::TableFast};
}

TwistLocalData twist_data_model_derived(const StronglyMinimalModel& S, const TwistClass& d) {
    auto [F, phi] = twist_strongly_minimal(S, d);
    return {base_data(S), local_data_from_tables(F), d, S.p, TwistPath::ModelDerived};
}

TwistLocalData twist_local_data(const StronglyMinimalModel& S, const TwistClass& d) {
    return S.p.is_two() ? twist_data_q2(S, d) : twist_data_odd(S, d);
}

std::string render_twist_tables() {
    std::ostringstream os;
    os << "[normalizers]\n";
    for (const auto& r : kIsoRules) {
        os << "vd=" << r.vd << " R=" << (r.fam < 0 ? "*" : rfam_name((RFam)r.fam)) << " j=" << r.j
           << " u=" << r.text[0] << " r=" << r.text[1] << " s=" << r.text[2] << " w=" << r.text[3]
           << "\n";
    }
    os << "[condition-polynomials]\n";
    for (const auto& r : kPolyRules)
        os << "vd=" << r.vd << " R=" << rfam_name(r.fam) << " j=" << r.j << " P=" << r.text
           << "\n";
    auto dump_rules = [&os](const SelectRule* begin, const SelectRule* end) {
        for (const SelectRule* r = begin; r != end; ++r) {
            bool parametrized = r->fam == RFam::In || r->fam == RFam::IStarN;
            os << "R=" << rfam_name(r->fam) << " when=\"" << r->when << "\" j=" << r->j;
            if (parametrized) {
                os << " V(n=11)=" << r->pattern(11).str() << " V(n=12)=" << r->pattern(12).str();
            } else {
                os << " V=" << r->pattern(0).str();
            }
            std::string side = r->side.str();
            if (!side.empty()) os << " side=" << side;
            os << " to=" << r->to << "\n";
        }
    };
    os << "[selection vd=0]\n";
    dump_rules(std::begin(kSelectV0), std::end(kSelectV0));
    os << "[selection vd=1]\n";
    dump_rules(std::begin(kSelectV1), std::end(kSelectV1));
    return os.str();
}

}  // namespace twistforge
