#include "twistforge/strongly_minimal.hpp"

#include <functional>

namespace twistforge {

namespace {

long ceil_half(long x) { return (x + 1) / 2; }  // ceil(x/2) for x >= 0

VEntry AL(long b) { return VEntry::at_least(b); }
VEntry EX(long b) { return VEntry::exact(b); }
VEntry ZZ() { return VEntry::zero(); }

Val vp(const Rational& x, const Prime& p) { return valuation(x, p); }

}  // namespace

const char* row_name(RowId id) {
    switch (id) {
        case RowId::I0_2a: return "I0/2/a";
        case RowId::I0_2b: return "I0/2/b";
        case RowId::I0_2c: return "I0/2/c";
        case RowId::I0_odd: return "I0/odd";
        case RowId::In_2_odd: return "In/2/odd";
        case RowId::In_2_even: return "In/2/even";
        case RowId::In_odd: return "In/odd";
        case RowId::II_2: return "II/2";
        case RowId::II_odd: return "II/odd";
        case RowId::III_2: return "III/2";
        case RowId::III_odd: return "III/odd";
        case RowId::IV_2: return "IV/2";
        case RowId::IV_odd: return "IV/odd";
        case RowId::IStar0_2: return "I0*/2";
        case RowId::IStar0_odd: return "I0*/odd";
        case RowId::IStarN_2_odd: return "In*/2/odd";
        case RowId::IStarN_2_even: return "In*/2/even";
        case RowId::IStarN_odd: return "In*/odd";
        case RowId::IVStar_2: return "IV*/2";
        case RowId::IVStar_odd: return "IV*/odd";
        case RowId::IIIStar_2: return "III*/2";
        case RowId::IIIStar_odd: return "III*/odd";
        case RowId::IIStar_2: return "II*/2";
        case RowId::IIStar_odd: return "II*/odd";
    }
    throw error("row_name: bad id");
}

ValuationVector row_pattern(RowId id, long n) {
    switch (id) {
        case RowId::I0_2a: return {{EX(0), AL(0), AL(2), AL(1), EX(0)}};
        case RowId::I0_2b: return {{EX(0), AL(0), AL(2), EX(0), AL(1)}};
        case RowId::I0_2c: return {{AL(1), AL(1), EX(0), AL(0), AL(0)}};
        case RowId::I0_odd: return {{ZZ(), AL(0), ZZ(), AL(0), AL(0)}};
        case RowId::In_2_odd:
            return {{EX(0), AL(0), EX((n + 1) / 2), AL((n + 1) / 2), EX(n)}};
        case RowId::In_2_even:
            return {{EX(0), AL(0), AL((n + 2) / 2), EX(n / 2), AL(n + 1)}};
        case RowId::In_odd: return {{ZZ(), EX(0), ZZ(), AL(ceil_half(n + 3)), EX(n)}};
        case RowId::II_2: return {{AL(1), AL(1), AL(1), AL(1), EX(1)}};
        case RowId::II_odd: return {{ZZ(), AL(1), ZZ(), AL(1), EX(1)}};
        case RowId::III_2: return {{AL(1), AL(1), AL(1), EX(1), AL(2)}};
        case RowId::III_odd: return {{ZZ(), AL(1), ZZ(), EX(1), AL(2)}};
        case RowId::IV_2: return {{AL(1), AL(1), EX(1), AL(2), AL(2)}};
        case RowId::IV_odd: return {{ZZ(), AL(1), ZZ(), AL(2), EX(2)}};
        case RowId::IStar0_2: return {{AL(1), AL(1), AL(2), AL(3), EX(3)}};
        case RowId::IStar0_odd: return {{ZZ(), AL(1), ZZ(), AL(2), AL(3)}};
        case RowId::IStarN_2_odd:
            return {{AL(1), EX(1), EX((n + 3) / 2), AL((n + 5) / 2), AL(n + 3)}};
        case RowId::IStarN_2_even:
            return {{AL(1), EX(1), AL((n + 4) / 2), EX((n + 4) / 2), AL(n + 3)}};
        case RowId::IStarN_odd:
            return {{ZZ(), EX(1), ZZ(), AL(ceil_half(n + 5)), EX(n + 3)}};
        case RowId::IVStar_2: return {{AL(1), AL(2), EX(2), AL(3), AL(4)}};
        case RowId::IVStar_odd: return {{ZZ(), AL(2), ZZ(), AL(3), EX(4)}};
        case RowId::IIIStar_2: return {{AL(1), AL(2), AL(3), EX(3), AL(5)}};
        case RowId::IIIStar_odd: return {{ZZ(), AL(2), ZZ(), EX(3), AL(5)}};
        case RowId::IIStar_2: return {{AL(1), AL(2), AL(3), AL(4), EX(5)}};
        case RowId::IIStar_odd: return {{ZZ(), AL(2), ZZ(), AL(4), EX(5)}};
    }
    throw error("row_pattern: bad id");
}

SideCondition row_side(RowId id) {
    switch (id) {
        case RowId::I0_odd: return SideCondition::delta_valuation(0);
        case RowId::IStar0_odd: return SideCondition::delta_valuation(6);
        default: return SideCondition::none();
    }
}

KodairaType row_type(RowId id, long n) {
    switch (id) {
        case RowId::I0_2a:
        case RowId::I0_2b:
        case RowId::I0_2c:
        case RowId::I0_odd: return KodairaType::I(0);
        case RowId::In_2_odd:
        case RowId::In_2_even:
        case RowId::In_odd: return KodairaType::I(n);
        case RowId::II_2:
        case RowId::II_odd: return KodairaType::II();
        case RowId::III_2:
        case RowId::III_odd: return KodairaType::III();
        case RowId::IV_2:
        case RowId::IV_odd: return KodairaType::IV();
        case RowId::IStar0_2:
        case RowId::IStar0_odd: return KodairaType::IStar(0);
        case RowId::IStarN_2_odd:
        case RowId::IStarN_2_even:
        case RowId::IStarN_odd: return KodairaType::IStar(n);
        case RowId::IVStar_2:
        case RowId::IVStar_odd: return KodairaType::IVStar();
        case RowId::IIIStar_2:
        case RowId::IIIStar_odd: return KodairaType::IIIStar();
        case RowId::IIStar_2:
        case RowId::IIStar_odd: return KodairaType::IIStar();
    }
    throw error("row_type: bad id");
}

std::vector<RowId> rows_for(const Prime& p) {
    if (p.is_two())
        return {RowId::I0_2a,        RowId::I0_2b,        RowId::I0_2c,   RowId::In_2_odd,
                RowId::In_2_even,    RowId::II_2,         RowId::III_2,   RowId::IV_2,
                RowId::IStar0_2,     RowId::IStarN_2_odd, RowId::IStarN_2_even,
                RowId::IVStar_2,     RowId::IIIStar_2,    RowId::IIStar_2};
    return {RowId::I0_odd,   RowId::In_odd,     RowId::II_odd,      RowId::III_odd,
            RowId::IV_odd,   RowId::IStar0_odd, RowId::IStarN_odd,  RowId::IVStar_odd,
            RowId::IIIStar_odd, RowId::IIStar_odd};
}

namespace {

// Recovers the n a parametrized row would have to carry to match V, from the
// slot that pins it down. Returns nullopt when no n can work.
std::optional<long> solve_n(RowId id, const ValuationVector& V) {
    auto exact_of = [&](int i) -> std::optional<long> {
        if (V.e[i].kind == VEntry::Kind::Exact) return V.e[i].bound;
        return std::nullopt;
    };
    switch (id) {
        case RowId::In_2_odd: {  // n = v(a6), odd
            auto v6 = exact_of(4);
            if (v6 && *v6 >= 1 && *v6 % 2 == 1) return *v6;
            return std::nullopt;
        }
        case RowId::In_2_even: {  // n = 2 v(a4), even
            auto v4 = exact_of(3);
            if (v4 && *v4 >= 1) return 2 * *v4;
            return std::nullopt;
        }
        case RowId::In_odd: {  // n = v(a6)
            auto v6 = exact_of(4);
            if (v6 && *v6 >= 1) return *v6;
            return std::nullopt;
        }
        case RowId::IStarN_2_odd: {  // n = 2 v(a3) - 3, odd
            auto v3 = exact_of(2);
            if (v3 && 2 * *v3 - 3 >= 1) return 2 * *v3 - 3;
            return std::nullopt;
        }
        case RowId::IStarN_2_even: {  // n = 2 v(a4) - 4, even
            auto v4 = exact_of(3);
            if (v4 && 2 * *v4 - 4 >= 2) return 2 * *v4 - 4;
            return std::nullopt;
        }
        case RowId::IStarN_odd: {  // n = v(a6) - 3
            auto v6 = exact_of(4);
            if (v6 && *v6 - 3 >= 1) return *v6 - 3;
            return std::nullopt;
        }
        default: return 0;
    }
}

}  // namespace

std::optional<RowMatch> classify(const WeierstrassModel& E, const Prime& p) {
    ValuationVector V = valuation_vector(E, p);
    std::optional<RowMatch> found;
    for (RowId id : rows_for(p)) {
        auto n = solve_n(id, V);
        if (!n) continue;
        if (!matches(V, row_pattern(id, *n))) continue;
        if (!row_side(id).holds(E, p)) continue;
        if (found)
            throw ambiguous_match(std::string("classify: rows ") + row_name(found->id) + " and " +
                                  row_name(id) + " both match " + E.str());
        found = RowMatch{id, row_type(id, *n)};
    }
    return found;
}

// ---------------------------------------------------------------------------
// Normalization into strongly-minimal position.

namespace {

struct Work {
    WeierstrassModel M;
    Prime p;
    Isomorphism phi;

    void move(const Rational& r, const Rational& s, const Rational& w) {
        Isomorphism t{Rational(1), r, s, w};
        M = apply_isomorphism(M, t);
        phi = compose(phi, t);
    }
    Val v(const Rational& x) const { return valuation(x, p); }
    Rational ppow(long k) const { return pow_int(Rational(p.p), k); }
};

// Residue characteristic 2: kill a2 mod 2 with the shear [1,0,1,0] when
// needed. Every unit of Z_2 is a square root of itself mod 2.
void shear_a2_even(Work& W) {
    if (W.v(W.M.a2) == 0) W.move(Rational(0), Rational(1), Rational(0));
}

// Odd residue characteristic: complete the square and the cube, leaving
// a1 = a3 = 0.
void kill_a1_a3(Work& W) {
    Rational half(Bigint(-1), Bigint(2));
    W.move(Rational(0), W.M.a1 * half, W.M.a3 * half);
    if (!W.M.a1.is_zero() || !W.M.a3.is_zero()) throw error("kill_a1_a3 failed");
}

void normalize_I0(Work& W, long) {
    if (!W.p.is_two()) {
        kill_a1_a3(W);
        return;
    }
    if (W.v(W.M.a1) == 0) {
        // Push a3 up: a3 -> 4 a3.
        W.move(Rational(3) * W.M.a3 / W.M.a1, Rational(0), Rational(0));
        if (W.v(W.M.a4) >= 1 || W.v(W.M.a6) >= 1) return;
        // Both a4 and a6 are units; trade a4 away, then repair a3 if needed.
        W.move(Rational(0), Rational(0), -W.M.a4 / W.M.a1);
        if (W.v(W.M.a3) < 2) W.move(W.M.a3 / W.M.a1, Rational(0), Rational(0));
    } else {
        // a3 is forced to be a unit; bump a2 with the translation r = a2.
        W.move(W.M.a2, Rational(0), Rational(0));
    }
}

void normalize_In(Work& W, long n) {
    long guard = n + 4;
    if (W.p.is_two()) {
        long target = ceil_half(n + 1);
        while (true) {
            if (guard-- < 0) throw internal_loop_bound("normalize_In: no convergence");
            if (!W.M.a3.is_zero()) W.move(-W.M.a3 / W.M.a1, Rational(0), Rational(0));
            if (W.v(W.M.a4) >= target) break;
            W.move(Rational(0), Rational(0), W.M.a4 / W.M.a1);
            if (W.v(W.M.a3) >= target) break;
        }
        if (!(W.v(W.M.a6) == n)) throw table_mismatch("normalize_In: v(a6) != n");
        if (n % 2 == 1) {
            if (!(W.v(W.M.a3) == (n + 1) / 2))
                W.move(W.ppow((n + 1) / 2), Rational(0), Rational(0));
        } else {
            W.move(Rational(0), Rational(0), W.ppow(n / 2));
        }
    } else {
        kill_a1_a3(W);
        long target = ceil_half(n + 3);
        while (W.v(W.M.a4) < target) {
            if (guard-- < 0) throw internal_loop_bound("normalize_In: no convergence");
            Rational r = (W.ppow(target) - W.M.a4) / (Rational(2) * W.M.a2);
            W.move(r, Rational(0), Rational(0));
        }
        if (!(W.v(W.M.a6) == n)) throw table_mismatch("normalize_In: v(a6) != n");
    }
}

void normalize_IStar0(Work& W, long) {
    if (!W.p.is_two()) {
        kill_a1_a3(W);
        return;
    }
    if (W.v(W.M.a4) == 2) W.move(Rational(2), Rational(0), Rational(0));
    if (!(W.v(W.M.a4) >= 3)) throw table_mismatch("normalize_IStar0: v(a4) < 3");
}

void normalize_IStarN(Work& W, long n) {
    if (W.p.is_two()) return;  // the algorithm's terminal coordinates already fit
    kill_a1_a3(W);
    if (n % 2 == 0) {
        long target = (n + 6) / 2;
        long guard = n + 4;
        while (W.v(W.M.a4) < target) {
            if (guard-- < 0) throw internal_loop_bound("normalize_IStarN: no convergence");
            Rational r = (W.ppow(target) - W.M.a4) / (Rational(2) * W.M.a2);
            W.move(r, Rational(0), Rational(0));
        }
    }
}

void normalize_shear_only(Work& W, long) {
    if (W.p.is_two())
        shear_a2_even(W);
    else
        kill_a1_a3(W);
}

void normalize_terminal(Work& W, long) {
    if (!W.p.is_two()) kill_a1_a3(W);
}

}  // namespace

std::pair<StronglyMinimalModel, Isomorphism> to_strongly_minimal(const WeierstrassModel& E,
                                                                 const Prime& p) {
    if (!E.is_integral_at(p)) throw error("to_strongly_minimal: model not integral at p");
    TateResult T = tate_local_data(E, p);
    if (T.restarts != 0 || !(valuation(E.discriminant(), p) == Val(T.data.delta)))
        throw not_minimal("to_strongly_minimal: model is not minimal at p");

    Work W{T.minimal_model, p, T.iso};
    const KodairaType t = T.data.type;
    using F = KodairaType::Family;
    switch (t.family) {
        case F::I:
            if (t.n == 0)
                normalize_I0(W, 0);
            else
                normalize_In(W, t.n);
            break;
        case F::II:
        case F::III:
        case F::IV: normalize_shear_only(W, 0); break;
        case F::IStar:
            if (t.n == 0)
                normalize_IStar0(W, 0);
            else
                normalize_IStarN(W, t.n);
            break;
        case F::IVStar:
        case F::IIIStar:
        case F::IIStar: normalize_terminal(W, 0); break;
    }

    auto match = classify(W.M, p);
    if (!match)
        throw table_mismatch("to_strongly_minimal: normalized model " + W.M.str() +
                             " matches no row (type " + t.str() + ")");
    if (match->type != t)
        throw table_mismatch("to_strongly_minimal: row type " + match->type.str() +
                             " disagrees with the algorithm's " + t.str());
    if (!(valuation(W.M.discriminant(), p) == Val(T.data.delta)))
        throw table_mismatch("to_strongly_minimal: discriminant valuation drifted");
    StronglyMinimalModel S{W.M, p, match->type, match->id};
    return {S, W.phi};
}

StronglyMinimalModel strongly_minimal_of(const WeierstrassModel& E, const Prime& p) {
    return to_strongly_minimal(E, p).first;
}

// ---------------------------------------------------------------------------
// Local data read off the coefficient conditions.

long tamagawa_from_row(const StronglyMinimalModel& S) {
    const WeierstrassModel& E = S.model;
    const Prime& p = S.p;
    long n = S.type.n;
    auto leg = [&](const Rational& x) { return legendre(x, p); };
    auto im_t = [&](const Rational& x) { return artin_schreier_in_image(x, p); };
    Rational p2 = pow_int(Rational(p.p), 2);

    switch (S.row) {
        case RowId::I0_2a:
        case RowId::I0_2b:
        case RowId::I0_2c:
        case RowId::I0_odd: return 1;
        case RowId::In_2_odd: return im_t(E.a2 / (E.a1 * E.a1)) ? n : 1;
        case RowId::In_2_even: return im_t(E.a2 / (E.a1 * E.a1)) ? n : 2;
        case RowId::In_odd: return leg(E.a2) == 1 ? n : 2 - (n % 2);
        case RowId::II_2:
        case RowId::II_odd: return 1;
        case RowId::III_2:
        case RowId::III_odd: return 2;
        case RowId::IV_2: return im_t(E.a6 / (E.a3 * E.a3)) ? 3 : 1;
        case RowId::IV_odd: return leg(E.a6 / p2) == 1 ? 3 : 1;
        case RowId::IStar0_2:
        case RowId::IStar0_odd:
            return 1 + count_cubic_roots_mod_p(E.a2 / Rational(p.p), E.a4 / p2,
                                               E.a6 / (p2 * Rational(p.p)), p);
        case RowId::IStarN_2_odd: return im_t(E.a6 / (E.a3 * E.a3)) ? 4 : 2;
        case RowId::IStarN_2_even:
            return im_t(Rational(p.p) * E.a6 / (E.a4 * E.a4)) ? 4 : 2;
        case RowId::IStarN_odd:
            if (n % 2 == 1) return leg(E.a6 / pow_int(Rational(p.p), n + 3)) == 1 ? 4 : 2;
            return leg(-(E.a6 / pow_int(Rational(p.p), n + 2)) / E.a2) == 1 ? 4 : 2;
        case RowId::IVStar_2: return im_t(E.a6 / (E.a3 * E.a3)) ? 3 : 1;
        case RowId::IVStar_odd: return leg(E.a6 / pow_int(Rational(p.p), 4)) == 1 ? 3 : 1;
        case RowId::IIIStar_2:
        case RowId::IIIStar_odd: return 2;
        case RowId::IIStar_2:
        case RowId::IIStar_odd: return 1;
    }
    throw error("tamagawa_from_row: bad row");
}

std::pair<long, long> disc_conductor_q2(const StronglyMinimalModel& S) {
    if (!S.p.is_two()) throw char2_required("disc_conductor_q2: p must be 2");
    const WeierstrassModel& E = S.model;
    const Prime& p = S.p;
    Val v1 = valuation(E.a1, p), v2 = valuation(E.a2, p), v3 = valuation(E.a3, p),
        v4 = valuation(E.a4, p), v6 = valuation(E.a6, p);
    Val vb6 = valuation(E.a3 * E.a3 + Rational(4) * E.a6, p);
    Val vb2 = valuation(E.a1 * E.a1 + Rational(4) * E.a2, p);
    long n = S.type.n;
    using F = KodairaType::Family;
    using P = std::pair<long, long>;

    switch (S.type.family) {
        case F::I: return n == 0 ? P{0, 0} : P{n, 1};
        case F::II:
            if (v3 == 1) return {4, 4};
            if (v1 >= 2) return {6, 6};
            return v4 == 1 ? P{7, 7} : P{6, 6};
        case F::III:
            if (v3 == 1) return {4, 3};
            if (v1 == 1) return {6, 5};
            if (v2 == 1) return vb6 == 4 ? P{9, 8} : P{8, 7};
            return vb6 == 4 ? P{8, 7} : P{9, 8};
        case F::IV: return {4, 2};
        case F::IStar:
            if (n == 0) {
                if (v3 == 2) return {8, 4};
                return v1 == 1 ? P{9, 5} : P{10, 6};
            }
            if (n == 1) return {8, 3};
            if (n == 2) {
                if (v1 == 1) return {10, 4};
                return v3 == 3 ? P{13, 7} : P{12, 6};
            }
            if (n == 3) return v1 == 1 ? P{11, 4} : P{12, 5};
            return v1 == 1 ? P{8 + n, 4} : P{10 + n, 6};
        case F::IVStar: return {8, 2};
        case F::IIIStar:
            if (v1 == 1) return {10, 3};
            if (v3 == 3) return {12, 5};
            if (v6 == 5) return vb2 == 4 ? P{15, 8} : P{14, 7};
            return vb2 == 4 ? P{14, 7} : P{15, 8};
        case F::IIStar:
            if (v1 == 1) return {11, 3};
            return v3 == 3 ? P{12, 4} : P{14, 6};
    }
    throw error("disc_conductor_q2: bad type");
}

ReductionKind reduction_from_row(const StronglyMinimalModel& S) {
    if (S.type.is_good()) return ReductionKind::Good;
    if (!S.type.is_multiplicative()) return ReductionKind::Additive;
    bool split;
    if (S.p.is_two())
        split = artin_schreier_in_image(S.model.a2 / (S.model.a1 * S.model.a1), S.p);
    else
        split = legendre(S.model.a2, S.p) == 1;
    return split ? ReductionKind::SplitMultiplicative : ReductionKind::NonsplitMultiplicative;
}

LocalData local_data_from_tables(const StronglyMinimalModel& S) {
    long delta, f;
    if (S.p.is_two()) {
        std::tie(delta, f) = disc_conductor_q2(S);
        Val actual = valuation(S.model.discriminant(), S.p);
        if (!(actual == Val(delta)))
            throw table_mismatch("local_data_from_tables: delta condition disagrees with model");
    } else {
        delta = valuation(S.model.discriminant(), S.p).value();
        f = delta - component_count(S.type) + 1;
    }
    LocalData d = make_local_data(S.type, delta, tamagawa_from_row(S), reduction_from_row(S));
    if (d.f != f) throw table_mismatch("local_data_from_tables: conductor condition violates Ogg");
    return d;
}

}  // namespace twistforge
