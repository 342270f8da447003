#include <random>

#include "doctest.h"
#include "twistforge/weierstrass.hpp"

using namespace twistforge;

namespace {

Rational rat(long n, long d = 1) { return Rational(Bigint(n), Bigint(d)); }
WeierstrassModel curve(long a1, long a2, long a3, long a4, long a6) {
    return {rat(a1), rat(a2), rat(a3), rat(a4), rat(a6)};
}

}  // namespace

TEST_CASE("invariants") {
    auto I = curve(0, 0, 0, 0, 1).invariants();
    CHECK(I.b2 == rat(0));
    CHECK(I.b4 == rat(0));
    CHECK(I.b6 == rat(4));
    CHECK(I.b8 == rat(0));
    CHECK(I.delta == rat(-432));
    CHECK(curve(1, 0, 0, 0, 0).discriminant() == rat(0));
    CHECK(curve(0, 0, 0, -1, 0).discriminant() == rat(64));
}

TEST_CASE("b8 identity and delta scaling") {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> c(-20, 20);
    for (int i = 0; i < 200; ++i) {
        WeierstrassModel E = curve(c(rng), c(rng), c(rng), c(rng), c(rng));
        auto I = E.invariants();
        CHECK(rat(4) * I.b8 == I.b2 * I.b6 - I.b4 * I.b4);

        long un = c(rng), ud = c(rng);
        if (un == 0 || ud == 0) continue;
        Isomorphism phi{rat(un, ud), rat(c(rng), 7), rat(c(rng), 3), rat(c(rng))};
        WeierstrassModel F = apply_isomorphism(E, phi);
        CHECK(F.discriminant() * pow_int(phi.u, 12) == E.discriminant());
    }
}

TEST_CASE("apply_isomorphism examples") {
    WeierstrassModel E = curve(3, -2, 5, 7, 11);
    CHECK(apply_isomorphism(E, Isomorphism::identity()) == E);

    WeierstrassModel F = apply_isomorphism(curve(0, 0, 0, 0, 1), {rat(1), rat(0), rat(0), rat(-1)});
    CHECK(F.a3 == rat(-2));
    CHECK(F.a6 == rat(0));
    CHECK(F.a1 == rat(0));
    CHECK(F.a2 == rat(0));
    CHECK(F.a4 == rat(0));
    CHECK(F.discriminant() == rat(-432));

    WeierstrassModel G = apply_isomorphism(E, Isomorphism::scaling(rat(2)));
    CHECK(G.discriminant() == E.discriminant() / rat(4096));
}

TEST_CASE("composition of isomorphisms") {
    Isomorphism phi{rat(2, 3), rat(1), rat(-2), rat(5)};
    CHECK(compose(Isomorphism::identity(), phi) == phi);
    CHECK(compose(phi, inverse(phi)) == Isomorphism::identity());
    Isomorphism t1{rat(1), rat(4), rat(0), rat(0)}, t2{rat(1), rat(-9), rat(0), rat(0)};
    CHECK(compose(t1, t2) == Isomorphism{rat(1), rat(-5), rat(0), rat(0)});

    std::mt19937_64 rng(17);
    std::uniform_int_distribution<long> c(-6, 6);
    for (int i = 0; i < 100; ++i) {
        WeierstrassModel E = curve(c(rng), c(rng), c(rng), c(rng), c(rng));
        Isomorphism f{rat(c(rng) == 0 ? 1 : c(rng)), rat(c(rng)), rat(c(rng)), rat(c(rng))};
        Isomorphism g{rat(c(rng) == 0 ? 1 : c(rng)), rat(c(rng)), rat(c(rng)), rat(c(rng))};
        CHECK(apply_isomorphism(apply_isomorphism(E, f), g) ==
              apply_isomorphism(E, compose(f, g)));
    }
}

TEST_CASE("valuation vectors") {
    auto V = valuation_vector(curve(0, 0, 0, 0, 1), Prime(2));
    CHECK(V.e[0] == VEntry::zero());
    CHECK(V.e[4] == VEntry::exact(0));
    V = valuation_vector(curve(2, 4, 8, 16, 64), Prime(2));
    CHECK(V == ValuationVector{{VEntry::exact(1), VEntry::exact(2), VEntry::exact(3),
                                VEntry::exact(4), VEntry::exact(6)}});
    V = valuation_vector(curve(1, 2, 0, 12, 18), Prime(3));
    CHECK(V == ValuationVector{{VEntry::exact(0), VEntry::exact(0), VEntry::zero(),
                                VEntry::exact(1), VEntry::exact(2)}});
}

TEST_CASE("pattern matching") {
    auto AL = VEntry::at_least;
    auto EX = VEntry::exact;
    auto ZZ = VEntry::zero;

    // (inf,=1,inf,=1,=1) against (inf,1,inf,1,=1)
    ValuationVector V{{ZZ(), EX(1), ZZ(), EX(1), EX(1)}};
    ValuationVector pat{{ZZ(), AL(1), ZZ(), AL(1), EX(1)}};
    CHECK(matches(V, pat));

    // (=1,=2,=3,=4,=5) against (1,2,3,4,=5)
    V = ValuationVector{{EX(1), EX(2), EX(3), EX(4), EX(5)}};
    pat = ValuationVector{{AL(1), AL(2), AL(3), AL(4), EX(5)}};
    CHECK(matches(V, pat));

    // exact mismatch on a6
    V = ValuationVector{{EX(0), EX(0), ZZ(), EX(3), EX(5)}};
    pat = ValuationVector{{EX(0), AL(0), AL(2), AL(1), EX(0)}};
    CHECK_FALSE(matches(V, pat));

    // a zero coefficient satisfies any AtLeast bound but no Exact bound
    V = ValuationVector{{ZZ(), EX(0), ZZ(), ZZ(), EX(0)}};
    CHECK(matches(V, ValuationVector{{ZZ(), AL(0), ZZ(), AL(9), EX(0)}}));
    CHECK_FALSE(matches(V, ValuationVector{{ZZ(), AL(0), ZZ(), EX(9), EX(0)}}));
}

TEST_CASE("twist models") {
    WeierstrassModel E = curve(0, 3, 0, -2, 7);
    WeierstrassModel T1 = twist_model(E, Bigint(1));
    CHECK(T1 == curve(0, 12, 0, -32, 448));

    CHECK(twist_model(curve(1, 0, 0, 0, 1), Bigint(-1)) == curve(0, -1, 0, 0, -64));
    CHECK(twist_model(curve(0, 0, 0, 1, 0), Bigint(2)) == curve(0, 0, 0, 64, 0));
    CHECK_THROWS_AS(twist_model(E, Bigint(0)), zero_twist);

    // twist by d s^2 equals the [s,0,0,0]-rescaled twist by d
    std::mt19937_64 rng(23);
    std::uniform_int_distribution<long> c(-5, 5);
    for (int i = 0; i < 100; ++i) {
        WeierstrassModel F = curve(c(rng), c(rng), c(rng), c(rng), c(rng));
        long d = c(rng), s = c(rng);
        if (d == 0 || s == 0) continue;
        CHECK(apply_isomorphism(twist_model(F, Bigint(d * s * s)), Isomorphism::scaling(rat(s))) ==
              twist_model(F, Bigint(d)));
    }
}

TEST_CASE("twist class canonicalization") {
    CHECK(canonicalize_twist(Bigint(9), Prime(2)).d == 1);
    CHECK(canonicalize_twist(Bigint(24), Prime(2)).d == 6);
    CHECK(canonicalize_twist(Bigint(12), Prime(2)).d == 3);
    CHECK(canonicalize_twist(Bigint(-1), Prime(2)).d == 7);
    CHECK(canonicalize_twist(Bigint(-2), Prime(2)).d == 14);
    CHECK(canonicalize_twist(Bigint(50), Prime(2)).d == 2);
    CHECK_THROWS_AS(canonicalize_twist(Bigint(0), Prime(2)), zero_twist);

    CHECK(canonicalize_twist(Bigint(4), Prime(5)).d == 1);
    CHECK(canonicalize_twist(Bigint(5), Prime(5)).d == 5);
    CHECK(canonicalize_twist(Bigint(10), Prime(5)).d == 10);  // 2 is a nonresidue mod 5
    CHECK(canonicalize_twist(Bigint(20), Prime(5)).d == 5);

    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long> c(-40, 40);
    for (long pv : {2L, 3L, 7L}) {
        Prime p(pv);
        for (int i = 0; i < 200; ++i) {
            long d = c(rng), s = c(rng);
            if (d == 0 || s == 0) continue;
            CHECK(canonicalize_twist(Bigint(d), p).d ==
                  canonicalize_twist(Bigint(d * s * s), p).d);
        }
    }
}

TEST_CASE("ainvs text format") {
    WeierstrassModel E = parse_ainvs("[1,0,0,-1,2]");
    CHECK(E == curve(1, 0, 0, -1, 2));
    E = parse_ainvs(R"(["1","0","0","-1/4","2"])");
    CHECK(E.a4 == rat(-1, 4));
    CHECK(parse_ainvs(format_ainvs(E)) == E);
    CHECK_THROWS_AS(parse_ainvs("[1,2,3]"), parse_error);
    CHECK_THROWS_AS(parse_ainvs("nonsense"), parse_error);
}
