#include "twistforge/weierstrass.hpp"

#include <sstream>

#include "json.hpp"

namespace twistforge {

Invariants WeierstrassModel::invariants() const {
    Invariants I;
    I.b2 = a1 * a1 + Rational(4) * a2;
    I.b4 = Rational(2) * a4 + a1 * a3;
    I.b6 = a3 * a3 + Rational(4) * a6;
    I.b8 = a1 * a1 * a6 + Rational(4) * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    I.delta = Rational(9) * I.b2 * I.b4 * I.b6 - I.b2 * I.b2 * I.b8 -
              Rational(8) * I.b4 * I.b4 * I.b4 - Rational(27) * I.b6 * I.b6;
    return I;
}

bool WeierstrassModel::is_integral_at(const Prime& p) const {
    for (const Rational* a : {&a1, &a2, &a3, &a4, &a6})
        if (!(valuation(*a, p) >= 0)) return false;
    return true;
}

std::string WeierstrassModel::str() const {
    return "[" + a1.str() + "," + a2.str() + "," + a3.str() + "," + a4.str() + "," + a6.str() +
           "]";
}

std::string Isomorphism::str() const {
    return "[" + u.str() + "," + r.str() + "," + s.str() + "," + w.str() + "]";
}

WeierstrassModel apply_isomorphism(const WeierstrassModel& E, const Isomorphism& phi) {
    if (phi.u.is_zero()) throw error("apply_isomorphism: u = 0");
    const Rational &u = phi.u, &r = phi.r, &s = phi.s, &w = phi.w;
    Rational u2 = u * u, u3 = u2 * u;
    WeierstrassModel F;
    F.a1 = (E.a1 + Rational(2) * s) / u;
    F.a2 = (E.a2 - s * E.a1 + Rational(3) * r - s * s) / u2;
    F.a3 = (E.a3 + r * E.a1 + Rational(2) * w) / u3;
    F.a4 = (E.a4 - s * E.a3 + Rational(2) * r * E.a2 - (w + r * s) * E.a1 + Rational(3) * r * r -
            Rational(2) * s * w) /
           (u2 * u2);
    F.a6 = (E.a6 + r * E.a4 + r * r * E.a2 + r * r * r - w * E.a3 - w * w - r * w * E.a1) /
           (u3 * u3);
    return F;
}

Isomorphism compose(const Isomorphism& a, const Isomorphism& b) {
    Isomorphism c;
    c.u = a.u * b.u;
    c.r = a.u * a.u * b.r + a.r;
    c.s = a.u * b.s + a.s;
    c.w = a.u * a.u * a.u * b.w + a.u * a.u * a.s * b.r + a.w;
    return c;
}

Isomorphism inverse(const Isomorphism& phi) {
    if (phi.u.is_zero()) throw error("inverse: u = 0");
    Rational u2 = phi.u * phi.u, u3 = u2 * phi.u;
    Isomorphism inv;
    inv.u = Rational(1) / phi.u;
    inv.r = -phi.r / u2;
    inv.s = -phi.s / phi.u;
    inv.w = (phi.r * phi.s - phi.w) / u3;
    return inv;
}

std::string VEntry::str() const {
    switch (kind) {
        case Kind::Zero: return "inf";
        case Kind::Exact: return "=" + std::to_string(bound);
        case Kind::AtLeast: return std::to_string(bound);
    }
    throw error("VEntry: bad kind");
}

std::string ValuationVector::str() const {
    std::string s = "(";
    for (int i = 0; i < 5; ++i) s += e[i].str() + (i < 4 ? "," : ")");
    return s;
}

bool SideCondition::holds(const WeierstrassModel& E, const Prime& p) const {
    switch (kind) {
        case Kind::None: return true;
        case Kind::DeltaValuation: return valuation(E.discriminant(), p) == Val(value);
        case Kind::A4PlusA6Unit: return valuation(E.a4 + E.a6, p) == Val(0);
    }
    throw error("SideCondition: bad kind");
}

std::string SideCondition::str() const {
    switch (kind) {
        case Kind::None: return "";
        case Kind::DeltaValuation: return "v(D)=" + std::to_string(value);
        case Kind::A4PlusA6Unit: return "v(a4+a6)=0";
    }
    throw error("SideCondition: bad kind");
}

ValuationVector valuation_vector(const WeierstrassModel& E, const Prime& p) {
    ValuationVector V;
    const Rational* as[5] = {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6};
    for (int i = 0; i < 5; ++i) {
        Val v = valuation(*as[i], p);
        V.e[i] = v.is_infinite() ? VEntry::zero() : VEntry::exact(v.value());
    }
    return V;
}

bool matches(const ValuationVector& V, const ValuationVector& pattern) {
    for (int i = 0; i < 5; ++i) {
        const VEntry& have = V.e[i];
        const VEntry& want = pattern.e[i];
        switch (want.kind) {
            case VEntry::Kind::Zero:
                if (have.kind != VEntry::Kind::Zero) return false;
                break;
            case VEntry::Kind::Exact:
                if (have.kind == VEntry::Kind::Zero) {
                    return false;
                } else if (have.kind == VEntry::Kind::Exact) {
                    if (have.bound != want.bound) return false;
                } else {
                    return false;  // an AtLeast entry cannot certify exactness
                }
                break;
            case VEntry::Kind::AtLeast:
                if (have.kind == VEntry::Kind::Zero) break;
                if (have.bound < want.bound) return false;
                break;
        }
    }
    return true;
}

bool matches(const WeierstrassModel& E, const Prime& p, const ValuationVector& pattern,
             const SideCondition& side) {
    return matches(valuation_vector(E, p), pattern) && side.holds(E, p);
}

TwistClass canonicalize_twist(const Bigint& d, const Prime& p) {
    if (d == 0) throw zero_twist("canonicalize_twist: d = 0");
    long v = valuation(d, p).value();
    Bigint unit = d;
    Bigint pk;
    mpz_pow_ui(pk.get_mpz_t(), p.p.get_mpz_t(), static_cast<unsigned long>(v));
    unit /= pk;

    Bigint rep;
    if (p.is_two()) {
        rep = unit % 8;
        if (rep < 0) rep += 8;
    } else {
        if (mpz_legendre(unit.get_mpz_t(), p.p.get_mpz_t()) == 1) {
            rep = 1;
        } else {
            Bigint n = 2;
            while (mpz_legendre(n.get_mpz_t(), p.p.get_mpz_t()) != -1) ++n;
            rep = n;
        }
    }
    TwistClass out;
    out.d = (v % 2 == 0) ? rep : rep * p.p;
    out.canonical = true;
    return out;
}

WeierstrassModel twist_model(const WeierstrassModel& E, const Bigint& d) {
    if (d == 0) throw zero_twist("twist_model: d = 0");
    Rational D{d};
    WeierstrassModel F;
    F.a1 = Rational(0);
    F.a3 = Rational(0);
    F.a2 = D * (E.a1 * E.a1 + Rational(4) * E.a2);
    F.a4 = D * D * (Rational(8) * E.a1 * E.a3 + Rational(16) * E.a4);
    F.a6 = D * D * D * (Rational(16) * E.a3 * E.a3 + Rational(64) * E.a6);
    return F;
}

WeierstrassModel twist_model(const WeierstrassModel& E, const TwistClass& d) {
    return twist_model(E, d.d);
}

WeierstrassModel parse_ainvs(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw parse_error(std::string("ainvs: ") + e.what());
    }
    if (!j.is_array() || j.size() != 5) throw parse_error("ainvs: expected a list of 5 entries");
    Rational a[5];
    for (int i = 0; i < 5; ++i) {
        const auto& v = j[i];
        if (v.is_number_integer()) {
            a[i] = Rational(Bigint(v.get<long long>()));
        } else if (v.is_string()) {
            a[i] = Rational::parse(v.get<std::string>());
        } else {
            throw parse_error("ainvs: entries must be integers or fraction strings");
        }
    }
    return WeierstrassModel{a[0], a[1], a[2], a[3], a[4]};
}

std::string format_ainvs(const WeierstrassModel& E) {
    nlohmann::json j = nlohmann::json::array();
    for (const Rational* a : {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6}) {
        if (a->is_integer() && a->num().fits_slong_p())
            j.push_back(a->num().get_si());
        else
            j.push_back(a->str());
    }
    return j.dump();
}

}  // namespace twistforge
