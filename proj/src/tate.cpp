#include "twistforge/tate.hpp"

namespace twistforge {

namespace {

// Integer-only working model. Tate's algorithm only ever translates by
// integers and rescales by powers of p, so after an initial clearing of
// denominators everything stays in Z.
struct ZModel {
    Bigint a1, a2, a3, a4, a6;

    Bigint b2() const { return a1 * a1 + 4 * a2; }
    Bigint b4() const { return 2 * a4 + a1 * a3; }
    Bigint b6() const { return a3 * a3 + 4 * a6; }
    Bigint b8() const {
        return a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    }
    Bigint delta() const {
        Bigint B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
        return 9 * B2 * B4 * B6 - B2 * B2 * B8 - 8 * B4 * B4 * B4 - 27 * B6 * B6;
    }
    Bigint c4() const { return b2() * b2() - 24 * b4(); }

    WeierstrassModel to_rational() const {
        return {Rational(a1), Rational(a2), Rational(a3), Rational(a4), Rational(a6)};
    }
};

long zval(const Bigint& n, const Prime& p) {
    // Precondition of all call sites: n != 0 has been established or the
    // caller handles infinity separately.
    Bigint rest;
    return static_cast<long>(mpz_remove(rest.get_mpz_t(), n.get_mpz_t(), p.p.get_mpz_t()));
}

Val zval_ext(const Bigint& n, const Prime& p) {
    return n == 0 ? Val::infinity() : Val(zval(n, p));
}

Bigint pow_p(const Prime& p, long k) {
    Bigint r;
    mpz_pow_ui(r.get_mpz_t(), p.p.get_mpz_t(), static_cast<unsigned long>(k));
    return r;
}

Bigint mod_p(const Bigint& a, const Bigint& m) {
    Bigint r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

// [1, r, s, w] on an integral model.
void translate(ZModel& M, const Bigint& r, const Bigint& s, const Bigint& w) {
    Bigint a1 = M.a1, a2 = M.a2, a3 = M.a3, a4 = M.a4, a6 = M.a6;
    M.a1 = a1 + 2 * s;
    M.a2 = a2 - s * a1 + 3 * r - s * s;
    M.a3 = a3 + r * a1 + 2 * w;
    M.a4 = a4 - s * a3 + 2 * r * a2 - (w + r * s) * a1 + 3 * r * r - 2 * s * w;
    M.a6 = a6 + r * a4 + r * r * a2 + r * r * r - w * a3 - w * w - r * w * a1;
}

// [p, 0, 0, 0]: divides a_i by p^i. Valid only when the divisions are exact.
void rescale_down(ZModel& M, const Prime& p) {
    Bigint q = p.p;
    M.a1 /= q;
    M.a2 /= q * q;
    M.a3 /= q * q * q;
    Bigint q4 = q * q * q * q;
    M.a4 /= q4;
    M.a6 /= q4 * q * q;
}

struct Step {
    Isomorphism phi;  // accumulated map from the caller's model
    void apply_translate(ZModel& M, const Bigint& r, const Bigint& s, const Bigint& w) {
        translate(M, r, s, w);
        phi = compose(phi, Isomorphism{Rational(1), Rational(r), Rational(s), Rational(w)});
    }
    void apply_rescale(ZModel& M, const Prime& p) {
        rescale_down(M, p);
        phi = compose(phi, Isomorphism::scaling(Rational(p.p)));
    }
};

// Singular point of the reduced curve, as residues in {0, ..., p-1}.
// Requires v(delta) > 0. Checked against the defining equations.
std::pair<Bigint, Bigint> singular_point(const ZModel& M, const Prime& p) {
    const Bigint& q = p.p;
    Bigint x0, y0;
    if (q == 2) {
        if (mod_p(M.a1, q) != 0) {
            x0 = mod_p(M.a3, q);
            y0 = mod_p(x0 + M.a4, q);
        } else {
            x0 = mod_p(M.a4, q);
            y0 = mod_p(x0 * x0 * x0 + M.a2 * x0 * x0 + M.a4 * x0 + M.a6, q);
        }
    } else if (q == 3) {
        Bigint B2 = M.b2(), B4 = M.b4(), B6 = M.b6();
        if (mod_p(B2, q) != 0) {
            Bigint inv;
            Bigint b2r = mod_p(B2, q);
            mpz_invert(inv.get_mpz_t(), b2r.get_mpz_t(), q.get_mpz_t());
            x0 = mod_p(-B4 * inv, q);
        } else {
            x0 = mod_p(-B6, q);
        }
        y0 = mod_p(M.a1 * x0 + M.a3, q);
    } else {
        Bigint B2 = M.b2(), B4 = M.b4(), B6 = M.b6(), C4 = M.c4();
        Bigint inv2;
        Bigint two = 2;
        mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), q.get_mpz_t());
        if (mod_p(C4, q) != 0) {
            Bigint c4r = mod_p(C4, q), inv;
            mpz_invert(inv.get_mpz_t(), c4r.get_mpz_t(), q.get_mpz_t());
            x0 = mod_p((18 * B6 - B2 * B4) * inv, q);
        } else {
            Bigint twelve = mod_p(Bigint(12), q), inv;
            mpz_invert(inv.get_mpz_t(), twelve.get_mpz_t(), q.get_mpz_t());
            x0 = mod_p(-B2 * inv, q);
        }
        y0 = mod_p(-(M.a1 * x0 + M.a3) * inv2, q);
    }
    // The point must lie on the reduced curve with both partials vanishing.
    Bigint F = y0 * y0 + M.a1 * x0 * y0 + M.a3 * y0 - x0 * x0 * x0 - M.a2 * x0 * x0 -
               M.a4 * x0 - M.a6;
    Bigint Fx = M.a1 * y0 - 3 * x0 * x0 - 2 * M.a2 * x0 - M.a4;
    Bigint Fy = 2 * y0 + M.a1 * x0 + M.a3;
    if (mod_p(F, q) != 0 || mod_p(Fx, q) != 0 || mod_p(Fy, q) != 0)
        throw error("tate: singular point location failed");
    return {x0, y0};
}

// Quotient a / p^k, exact by construction at the call sites.
Bigint shift_down(const Bigint& a, const Prime& p, long k) { return a / pow_p(p, k); }

ReductionKind splitness_at_origin(const ZModel& M, const Prime& p) {
    // Tangent quadratic T^2 + a1 T - a2 at the node.
    auto q = fp::analyze_quadratic(Bigint(1), M.a1, -M.a2, p.p);
    if (!q.separable) throw error("tate: node quadratic is inseparable");
    return q.rational == 2 ? ReductionKind::SplitMultiplicative
                           : ReductionKind::NonsplitMultiplicative;
}

}  // namespace

ReductionKind multiplicative_splitness(const WeierstrassModel& E, const Prime& p) {
    Rational t = E.a1 * E.a1 + Rational(4) * E.a2;  // b2 must be a unit here
    if (!(valuation(t, p) == 0))
        throw error("multiplicative_splitness: model is not a node at the origin");
    if (p.is_two()) {
        // Split iff a1^{-2} a2 lies in the image of x -> x^2 + x on F_2.
        return artin_schreier_in_image(E.a2 / (E.a1 * E.a1), p)
                   ? ReductionKind::SplitMultiplicative
                   : ReductionKind::NonsplitMultiplicative;
    }
    // Split iff T^2 + a1 T - a2 splits, i.e. its discriminant b2 is a square.
    return legendre(t, p) == 1 ? ReductionKind::SplitMultiplicative
                               : ReductionKind::NonsplitMultiplicative;
}

TateResult tate_local_data(const WeierstrassModel& E, const Prime& p) {
    if (E.is_singular()) throw singular_model("tate_local_data: discriminant is zero");

    Step st;
    // Clear denominators with [1/m, 0, 0, 0], which multiplies a_i by m^i.
    Bigint m = 1;
    for (const Rational* a : {&E.a1, &E.a2, &E.a3, &E.a4, &E.a6}) {
        Bigint l;
        mpz_lcm(l.get_mpz_t(), m.get_mpz_t(), a->den().get_mpz_t());
        m = l;
    }
    ZModel M;
    {
        Rational mm{m};
        M.a1 = Rational(E.a1 * mm).num();
        M.a2 = Rational(E.a2 * mm * mm).num();
        Rational m3 = mm * mm * mm;
        M.a3 = Rational(E.a3 * m3).num();
        M.a4 = Rational(E.a4 * mm * mm * mm * mm).num();
        M.a6 = Rational(E.a6 * m3 * m3).num();
        if (m != 1) st.phi = Isomorphism::scaling(Rational(Bigint(1), m));
    }

    int restarts = 0;
    const long max_restarts = zval(M.delta(), p) / 12 + 2;

    while (true) {
        Bigint D = M.delta();
        long vD = zval(D, p);

        // Good reduction.
        if (vD == 0) {
            TateResult out;
            out.data = make_local_data(KodairaType::I(0), 0, 1, ReductionKind::Good);
            out.minimal_model = M.to_rational();
            out.iso = st.phi;
            out.restarts = restarts;
            return out;
        }

        // Move the singular point of the reduced curve to the origin.
        auto [x0, y0] = singular_point(M, p);
        st.apply_translate(M, x0, Bigint(0), y0);

        // Node: multiplicative reduction of type I_n, n = v(delta).
        if (zval_ext(M.b2(), p) == 0) {
            ReductionKind red = splitness_at_origin(M, p);
            long n = vD;
            long c = red == ReductionKind::SplitMultiplicative ? n : 2 - (n % 2);
            TateResult out;
            out.data = make_local_data(KodairaType::I(n), n, c, red);
            out.minimal_model = M.to_rational();
            out.iso = st.phi;
            out.restarts = restarts;
            return out;
        }

        auto finish = [&](KodairaType t, long c) {
            TateResult out;
            out.data = make_local_data(t, vD, c, ReductionKind::Additive);
            out.minimal_model = M.to_rational();
            out.iso = st.phi;
            out.restarts = restarts;
            return out;
        };

        // Cusp from here on.
        if (zval_ext(M.a6, p) < 2) return finish(KodairaType::II(), 1);
        if (zval_ext(M.b8(), p) < 3) return finish(KodairaType::III(), 2);
        if (zval_ext(M.b6(), p) < 3) {
            auto q = fp::analyze_quadratic(Bigint(1), shift_down(M.a3, p, 1),
                                           -shift_down(M.a6, p, 2), p.p);
            if (!q.separable) throw error("tate: step-5 quadratic inseparable");
            return finish(KodairaType::IV(), q.rational == 2 ? 3 : 1);
        }

        // Normalize to v(a1), v(a2) >= 1, v(a3), v(a4) >= 2, v(a6) >= 3.
        if (p.is_two()) {
            Bigint s0 = mod_p(M.a2, p.p);
            Bigint w0 = 2 * mod_p(shift_down(mod_p(M.a6, Bigint(8)), p, 2), p.p);
            st.apply_translate(M, Bigint(0), s0, w0);
        } else {
            Bigint p2 = pow_p(p, 2), inv2;
            Bigint two = 2;
            mpz_invert(inv2.get_mpz_t(), two.get_mpz_t(), p2.get_mpz_t());
            Bigint s0 = mod_p(-M.a1 * inv2, p.p);
            Bigint w0 = mod_p(-M.a3 * inv2, p2);
            st.apply_translate(M, Bigint(0), s0, w0);
        }
        if (!(zval_ext(M.a1, p) >= 1 && zval_ext(M.a2, p) >= 1 && zval_ext(M.a3, p) >= 2 &&
              zval_ext(M.a4, p) >= 2 && zval_ext(M.a6, p) >= 3))
            throw error("tate: step-6 normalization failed");

        // Reduction of the auxiliary cubic T^3 + a_{2,1} T^2 + a_{4,2} T + a_{6,3}.
        auto cubic = fp::analyze_cubic(mod_p(shift_down(M.a2, p, 1), p.p),
                                       mod_p(shift_down(M.a4, p, 2), p.p),
                                       mod_p(shift_down(M.a6, p, 3), p.p), p.p);

        if (cubic.distinct == 3) return finish(KodairaType::IStar(0), 1 + cubic.rational);

        if (cubic.distinct == 2) {
            // Double root: type I*_n for some n > 0; move the double root to 0.
            st.apply_translate(M, p.p * *cubic.multiple_root, Bigint(0), Bigint(0));
            if (!(zval_ext(M.a2, p) == 1 && zval_ext(M.a4, p) >= 3 && zval_ext(M.a6, p) >= 4))
                throw error("tate: step-7 entry state invalid");
            long mx = 2, my = 2;
            long guard = vD + 4;
            while (guard-- > 0) {
                if (mx == my) {
                    auto q = fp::analyze_quadratic(Bigint(1),
                                                   mod_p(shift_down(M.a3, p, my), p.p),
                                                   mod_p(-shift_down(M.a6, p, mx + my), p.p),
                                                   p.p);
                    if (q.separable) {
                        long n = mx + my - 3;
                        return finish(KodairaType::IStar(n), q.rational == 2 ? 4 : 2);
                    }
                    st.apply_translate(M, Bigint(0), Bigint(0),
                                       pow_p(p, my) * *q.double_root);
                    ++my;
                } else {
                    auto q = fp::analyze_quadratic(mod_p(shift_down(M.a2, p, 1), p.p),
                                                   mod_p(shift_down(M.a4, p, mx + 1), p.p),
                                                   mod_p(shift_down(M.a6, p, mx + my), p.p),
                                                   p.p);
                    if (q.separable) {
                        long n = mx + my - 3;
                        return finish(KodairaType::IStar(n), q.rational == 2 ? 4 : 2);
                    }
                    st.apply_translate(M, pow_p(p, mx) * *q.double_root, Bigint(0), Bigint(0));
                    ++mx;
                }
            }
            throw internal_loop_bound("tate: I*_n subprocedure exceeded its bound");
        }

        // Triple root: move it to 0.
        st.apply_translate(M, p.p * *cubic.multiple_root, Bigint(0), Bigint(0));
        if (!(zval_ext(M.a2, p) >= 2 && zval_ext(M.a4, p) >= 3 && zval_ext(M.a6, p) >= 4))
            throw error("tate: step-8 entry state invalid");

        {
            auto q = fp::analyze_quadratic(Bigint(1), mod_p(shift_down(M.a3, p, 2), p.p),
                                           mod_p(-shift_down(M.a6, p, 4), p.p), p.p);
            if (q.separable) return finish(KodairaType::IVStar(), q.rational == 2 ? 3 : 1);
            st.apply_translate(M, Bigint(0), Bigint(0), pow_p(p, 2) * *q.double_root);
        }
        if (!(zval_ext(M.a3, p) >= 3 && zval_ext(M.a6, p) >= 5))
            throw error("tate: step-9 entry state invalid");

        if (zval_ext(M.a4, p) < 4) return finish(KodairaType::IIIStar(), 2);
        if (zval_ext(M.a6, p) < 6) return finish(KodairaType::IIStar(), 1);

        // Everything divisible: the model was non-minimal. Rescale and rerun.
        if (!(zval_ext(M.a1, p) >= 1 && zval_ext(M.a2, p) >= 2 && zval_ext(M.a3, p) >= 3 &&
              zval_ext(M.a4, p) >= 4 && zval_ext(M.a6, p) >= 6))
            throw error("tate: step-11 divisibility violated");
        st.apply_rescale(M, p);
        if (++restarts > max_restarts)
            throw internal_loop_bound("tate: too many non-minimal restarts");
    }
}

}  // namespace twistforge
