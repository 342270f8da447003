#include <random>

#include "doctest.h"
#include "twistforge/padic.hpp"

using namespace twistforge;

namespace {

Rational rat(long n, long d = 1) { return Rational(Bigint(n), Bigint(d)); }

// Independent root counter: walk every residue.
int count_cubic_brute(long c2, long c1, long c0, long p) {
    int roots = 0;
    for (long x = 0; x < p; ++x) {
        long v = ((x * x % p) * x % p + c2 % p * (x * x % p) + c1 % p * x + c0 % p) % p;
        v = ((v % p) + p) % p;
        if (v == 0) ++roots;
    }
    return roots;
}

// Independent quadratic residue test: enumerate squares.
bool is_square_brute(long u, long p) {
    u = ((u % p) + p) % p;
    for (long x = 0; x < p; ++x)
        if (x * x % p == u) return true;
    return false;
}

}  // namespace

TEST_CASE("valuation of rationals") {
    CHECK(valuation(rat(12), Prime(2)) == Val(2));
    CHECK(valuation(rat(0), Prime(5)).is_infinite());
    CHECK(valuation(rat(5, 9), Prime(3)) == Val(-2));
    CHECK(valuation(rat(-48), Prime(2)) == Val(4));
    CHECK(valuation(rat(7, 2), Prime(2)) == Val(-1));
}

TEST_CASE("valuation is a discrete valuation") {
    std::mt19937_64 rng(12345);
    std::uniform_int_distribution<long> coef(-500, 500);
    for (long pv : {2L, 3L, 7L}) {
        Prime p(pv);
        for (int i = 0; i < 300; ++i) {
            long an = coef(rng), ad = coef(rng), bn = coef(rng), bd = coef(rng);
            if (ad == 0 || bd == 0) continue;
            Rational x = rat(an, ad), y = rat(bn, bd);
            if (!x.is_zero() && !y.is_zero()) {
                CHECK(valuation(x * y, p) ==
                      Val(valuation(x, p).value() + valuation(y, p).value()));
            }
            Val vx = valuation(x, p), vy = valuation(y, p), vs = valuation(x + y, p);
            CHECK(vs >= Val::min(vx, vy));
            if (!(vx == vy)) CHECK(vs == Val::min(vx, vy));
        }
    }
}

TEST_CASE("unit_part_mod") {
    CHECK(unit_part_mod(rat(7, 3), Prime(2), 2) == 1);
    CHECK(unit_part_mod(rat(1), Prime(2), 3) == 1);
    CHECK(unit_part_mod(rat(5), Prime(2), 2) == 1);
    CHECK(unit_part_mod(rat(-1), Prime(2), 3) == 7);
    CHECK_THROWS_AS(unit_part_mod(rat(4), Prime(2), 2), not_a_unit);
    CHECK_THROWS_AS(unit_part_mod(rat(1, 2), Prime(2), 2), not_a_unit);
}

TEST_CASE("unit_part_mod is compatible along precision") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<long> coef(1, 400);
    for (long pv : {2L, 5L}) {
        Prime p(pv);
        for (int i = 0; i < 200; ++i) {
            long n = coef(rng), d = coef(rng);
            Rational x = rat(n, d);
            if (!(valuation(x, p) == Val(0))) continue;
            for (unsigned k = 1; k <= 4; ++k) {
                Bigint pk;
                mpz_pow_ui(pk.get_mpz_t(), p.p.get_mpz_t(), k);
                CHECK(unit_part_mod(x, p, k + 1) % pk == unit_part_mod(x, p, k));
            }
        }
    }
}

TEST_CASE("legendre symbol") {
    CHECK(legendre(rat(1), Prime(7)) == 1);
    CHECK(legendre(rat(2), Prime(7)) == (is_square_brute(2, 7) ? 1 : -1));
    CHECK(legendre(rat(2), Prime(7)) == 1);
    CHECK(legendre(rat(2), Prime(5)) == -1);
    CHECK_THROWS_AS(legendre(rat(1), Prime(2)), odd_prime_required);
    CHECK_THROWS_AS(legendre(rat(10), Prime(5)), not_a_unit);

    // Against the enumeration oracle, and invariance under unit squares.
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> coef(1, 200);
    for (long pv : {3L, 5L, 7L, 11L, 13L}) {
        Prime p(pv);
        for (int i = 0; i < 100; ++i) {
            long u = coef(rng), w = coef(rng);
            if (u % pv == 0 || w % pv == 0) continue;
            CHECK(legendre(rat(u), p) == (is_square_brute(u, pv) ? 1 : -1));
            CHECK(legendre(rat(u * w * w), p) == legendre(rat(u), p));
        }
    }
}

TEST_CASE("Artin-Schreier membership over F_2") {
    CHECK(artin_schreier_in_image(rat(0), Prime(2)));
    CHECK(artin_schreier_in_image(rat(6), Prime(2)));
    CHECK_FALSE(artin_schreier_in_image(rat(3), Prime(2)));
    CHECK(artin_schreier_in_image(rat(2, 3), Prime(2)));
    CHECK_THROWS_AS(artin_schreier_in_image(rat(1), Prime(3)), char2_required);
}

TEST_CASE("cubic root counting") {
    CHECK(count_cubic_roots_mod_p(rat(0), rat(0), rat(0), Prime(5)) == 1);
    CHECK(count_cubic_roots_mod_p(rat(0), rat(-1), rat(0), Prime(5)) == 3);
    CHECK(count_cubic_roots_mod_p(rat(1), rat(0), rat(1), Prime(2)) ==
          count_cubic_brute(1, 0, 1, 2));
    CHECK(count_cubic_roots_mod_p(rat(1), rat(0), rat(1), Prime(2)) == 1);
}

TEST_CASE("cubic root counting matches enumeration for p <= 13") {
    for (long p : {2L, 3L, 5L, 7L, 11L, 13L}) {
        for (long c2 = 0; c2 < std::min(p, 5L); ++c2)
            for (long c1 = 0; c1 < std::min(p, 5L); ++c1)
                for (long c0 = 0; c0 < std::min(p, 5L); ++c0)
                    CHECK(count_cubic_roots_mod_p(rat(c2), rat(c1), rat(c0), Prime(p)) ==
                          count_cubic_brute(c2, c1, c0, p));
    }
}

TEST_CASE("cubic multiplicity analysis") {
    // (X-1)^2 (X-2) over F_7: X^3 - 4X^2 + 5X - 2
    auto r = fp::analyze_cubic(Bigint(-4), Bigint(5), Bigint(-2), Bigint(7));
    CHECK(r.distinct == 2);
    CHECK(r.rational == 2);
    REQUIRE(r.multiple_root.has_value());
    CHECK(*r.multiple_root == 1);
    // (X-2)^3 over F_5
    r = fp::analyze_cubic(Bigint(-6), Bigint(12), Bigint(-8), Bigint(5));
    CHECK(r.distinct == 1);
    REQUIRE(r.multiple_root.has_value());
    CHECK(*r.multiple_root == 2);
    // X^3 + 1 over F_3 = (X+1)^3
    r = fp::analyze_cubic(Bigint(0), Bigint(0), Bigint(1), Bigint(3));
    CHECK(r.distinct == 1);
    CHECK(*r.multiple_root == 2);
    // X^3 - X over F_13: separable, fully split
    r = fp::analyze_cubic(Bigint(0), Bigint(-1), Bigint(0), Bigint(13));
    CHECK(r.distinct == 3);
    CHECK(r.rational == 3);
}

TEST_CASE("quadratic analysis") {
    // Y^2 + Y + 1 irreducible over F_2
    auto q = fp::analyze_quadratic(Bigint(1), Bigint(1), Bigint(1), Bigint(2));
    CHECK(q.separable);
    CHECK(q.rational == 0);
    // Y^2 + 1 over F_2 has the double root 1
    q = fp::analyze_quadratic(Bigint(1), Bigint(0), Bigint(1), Bigint(2));
    CHECK_FALSE(q.separable);
    CHECK(*q.double_root == 1);
    // Y^2 - 2 over F_7: 2 = 3^2, splits
    q = fp::analyze_quadratic(Bigint(1), Bigint(0), Bigint(-2), Bigint(7));
    CHECK(q.separable);
    CHECK(q.rational == 2);
    // Y^2 - 2 over F_5: nonresidue
    q = fp::analyze_quadratic(Bigint(1), Bigint(0), Bigint(-2), Bigint(5));
    CHECK(q.separable);
    CHECK(q.rational == 0);
}
