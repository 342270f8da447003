#include "twistforge/padic.hpp"

#include <algorithm>

namespace twistforge {

Rational Rational::parse(const std::string& s) {
    if (s.empty()) throw parse_error("empty rational literal");
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) {
            return Rational(Bigint(s));
        }
        Bigint num(s.substr(0, slash));
        Bigint den(s.substr(slash + 1));
        if (den == 0) throw parse_error("zero denominator in '" + s + "'");
        return Rational(num, den);
    } catch (const std::invalid_argument&) {
        throw parse_error("malformed rational '" + s + "'");
    }
}

std::string Rational::str() const {
    if (is_integer()) return num().get_str();
    return num().get_str() + "/" + den().get_str();
}

Rational pow_int(const Rational& base, long e) {
    if (e < 0) {
        if (base.is_zero()) throw error("pow_int: negative power of zero");
        return Rational(1) / pow_int(base, -e);
    }
    Rational r(1), b = base;
    while (e > 0) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

Prime::Prime(const Bigint& value) : p(value) {
    if (p < 2 || mpz_probab_prime_p(p.get_mpz_t(), 30) == 0)
        throw error("Prime: " + p.get_str() + " is not prime");
}

Val valuation(const Bigint& n, const Prime& p) {
    if (n == 0) return Val::infinity();
    Bigint rest;
    unsigned long v = mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.p.get_mpz_t());
    return Val(static_cast<long>(v));
}

Val valuation(const Rational& x, const Prime& p) {
    if (x.is_zero()) return Val::infinity();
    return Val(valuation(x.num(), p).value() - valuation(x.den(), p).value());
}

static Bigint mod_pos(const Bigint& a, const Bigint& m) {
    Bigint r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

Bigint residue_mod(const Rational& x, const Prime& p, unsigned k) {
    Val v = valuation(x, p);
    if (!(v >= 0)) throw not_a_unit("residue_mod: negative valuation");
    Bigint pk;
    mpz_pow_ui(pk.get_mpz_t(), p.p.get_mpz_t(), k);
    Bigint dinv;
    if (mpz_invert(dinv.get_mpz_t(), x.den().get_mpz_t(), pk.get_mpz_t()) == 0)
        throw not_a_unit("residue_mod: denominator not invertible");
    return mod_pos(x.num() * dinv, pk);
}

Bigint unit_part_mod(const Rational& x, const Prime& p, unsigned k) {
    if (!(valuation(x, p) == 0))
        throw not_a_unit("unit_part_mod: input is not a p-adic unit");
    return residue_mod(x, p, k);
}

int legendre(const Rational& u, const Prime& p) {
    if (p.is_two()) throw odd_prime_required("legendre: p must be odd");
    if (!(valuation(u, p) == 0)) throw not_a_unit("legendre: input is not a unit");
    Bigint r = residue_mod(u, p, 1);
    return mpz_legendre(r.get_mpz_t(), p.p.get_mpz_t());
}

bool artin_schreier_in_image(const Rational& a, const Prime& p) {
    if (!p.is_two()) throw char2_required("artin_schreier_in_image: p must be 2");
    if (!(valuation(a, p) >= 0)) throw not_a_unit("artin_schreier_in_image: v_2 < 0");
    return residue_mod(a, p, 1) == 0;
}

namespace fp {

Bigint norm(const Bigint& a, const Bigint& p) {
    Bigint r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    return r;
}

Poly trim(Poly f, const Bigint& p) {
    for (auto& c : f) c = norm(c, p);
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

Poly mul(const Poly& a, const Poly& b, const Bigint& p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Bigint(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return trim(std::move(r), p);
}

Poly mod(Poly a, const Poly& b, const Bigint& p) {
    a = trim(std::move(a), p);
    Bigint lc_inv;
    if (b.empty()) throw error("fp::mod: division by zero polynomial");
    mpz_invert(lc_inv.get_mpz_t(), b.back().get_mpz_t(), p.get_mpz_t());
    while (a.size() >= b.size()) {
        Bigint q = norm(a.back() * lc_inv, p);
        size_t shift = a.size() - b.size();
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= q * b[i];
        a = trim(std::move(a), p);
        if (a.empty()) break;
    }
    return a;
}

Poly gcd(Poly a, Poly b, const Bigint& p) {
    a = trim(std::move(a), p);
    b = trim(std::move(b), p);
    while (!b.empty()) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty() && a.back() != 1) {
        Bigint inv;
        mpz_invert(inv.get_mpz_t(), a.back().get_mpz_t(), p.get_mpz_t());
        for (auto& c : a) c = norm(c * inv, p);
    }
    return a;
}

Poly xpow_p_mod(const Poly& f, const Bigint& p) {
    // X^p mod f by square-and-multiply over the exponent's bits.
    Poly acc{Bigint(1)};
    Poly base{Bigint(0), Bigint(1)};
    base = mod(base, f, p);
    Bigint e = p;
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) acc = mod(mul(acc, base, p), f, p);
        base = mod(mul(base, base, p), f, p);
        e >>= 1;
    }
    return acc;
}

int count_roots(const Poly& f0, const Bigint& p) {
    Poly f = trim(f0, p);
    if (f.empty()) throw error("fp::count_roots: zero polynomial");
    if (f.size() == 1) return 0;
    // gcd(X^p - X, f) splits into distinct linear factors, one per root.
    Poly xp = xpow_p_mod(f, p);
    if (xp.size() < 2) xp.resize(2, Bigint(0));
    xp[1] -= 1;
    Poly g = gcd(f, trim(std::move(xp), p), p);
    return g.empty() ? 0 : static_cast<int>(g.size()) - 1;
}

Poly deriv(const Poly& f, const Bigint& p) {
    Poly d;
    for (size_t i = 1; i < f.size(); ++i) d.push_back(f[i] * long(i));
    return trim(std::move(d), p);
}

CubicRoots analyze_cubic(const Bigint& c2, const Bigint& c1, const Bigint& c0, const Bigint& p) {
    Poly f{norm(c0, p), norm(c1, p), norm(c2, p), Bigint(1)};
    CubicRoots out{};
    out.rational = count_roots(f, p);

    Poly d = deriv(f, p);
    Poly g = d.empty() ? f : gcd(f, d, p);
    // g collects the repeated part: empty or constant means separable.
    if (g.size() <= 1) {
        out.distinct = 3;
        return out;
    }
    if (g.size() == 2) {
        // One double root (g linear) or, in characteristic 3 with f' != 0,
        // impossible; the root of g is the multiple root.
        Bigint inv;
        mpz_invert(inv.get_mpz_t(), g[1].get_mpz_t(), p.get_mpz_t());
        Bigint r = norm(-g[0] * inv, p);
        // Distinguish double vs triple: (X - r)^3 == f?
        Bigint r3 = norm(r * r * r, p);
        bool triple = norm(c2 + 3 * r, p) == 0 && norm(c1 - 3 * r * r, p) == 0 &&
                      norm(c0 + r3, p) == 0;
        out.distinct = triple ? 1 : 2;
        out.multiple_root = r;
        return out;
    }
    // g of degree >= 2: triple root. In char 3 with f' == 0 we land here with
    // g == f; the root satisfies r^3 = -c0, and x -> x^3 is bijective on F_p.
    Bigint r;
    if (p == 3) {
        r = norm(-c0, p);
    } else {
        // (X - r)^2 divides f and g = (X - r)^2 up to scalar.
        Bigint inv, two_lc = 2 * g[2];
        mpz_invert(inv.get_mpz_t(), two_lc.get_mpz_t(), p.get_mpz_t());
        r = norm(-g[1] * inv, p);
    }
    out.distinct = 1;
    out.multiple_root = r;
    return out;
}

QuadRoots analyze_quadratic(const Bigint& a, const Bigint& b, const Bigint& c, const Bigint& p) {
    QuadRoots out{};
    Poly f{norm(c, p), norm(b, p), norm(a, p)};
    if (f[2] == 0) throw error("fp::analyze_quadratic: leading coefficient vanishes");
    out.rational = count_roots(f, p);
    if (p == 2) {
        // Separable iff the linear coefficient is a unit.
        out.separable = f[1] != 0;
        if (!out.separable) {
            // Double root r with r^2 = -c/a = c/a; squaring is the identity on F_2.
            Bigint ainv;
            mpz_invert(ainv.get_mpz_t(), f[2].get_mpz_t(), p.get_mpz_t());
            out.double_root = norm(f[0] * ainv, p);
        }
        return out;
    }
    Bigint disc = norm(b * b - 4 * a * c, p);
    out.separable = disc != 0;
    if (!out.separable) {
        Bigint inv, two_a = 2 * a;
        mpz_invert(inv.get_mpz_t(), two_a.get_mpz_t(), p.get_mpz_t());
        out.double_root = norm(-b * inv, p);
    }
    return out;
}

}  // namespace fp

int count_cubic_roots_mod_p(const Rational& c2, const Rational& c1, const Rational& c0,
                            const Prime& p) {
    fp::Poly f{residue_mod(c0, p, 1), residue_mod(c1, p, 1), residue_mod(c2, p, 1), Bigint(1)};
    return fp::count_roots(f, p.p);
}

}  // namespace twistforge
