#include <random>

#include "doctest.h"
#include "twistforge/tate.hpp"

using namespace twistforge;

namespace {

Rational rat(long n, long d = 1) { return Rational(Bigint(n), Bigint(d)); }
WeierstrassModel curve(long a1, long a2, long a3, long a4, long a6) {
    return {rat(a1), rat(a2), rat(a3), rat(a4), rat(a6)};
}

void expect(const WeierstrassModel& E, long p, const char* type, long delta, long f, long c) {
    TateResult r = tate_local_data(E, Prime(p));
    CAPTURE(E.str());
    CAPTURE(p);
    CHECK(r.data.type.str() == type);
    CHECK(r.data.delta == delta);
    CHECK(r.data.f == f);
    CHECK(r.data.c == c);
    r.data.validate();
    // The returned model must be reachable from E by the returned map and
    // carry the minimal discriminant valuation.
    CHECK(apply_isomorphism(E, r.iso) == r.minimal_model);
    CHECK(valuation(r.minimal_model.discriminant(), Prime(p)) == Val(delta));
}

}  // namespace

TEST_CASE("good reduction") {
    expect(curve(0, 0, 0, 1, 1), 5, "I0", 0, 0, 1);
}

TEST_CASE("split multiplicative reduction") {
    WeierstrassModel E = curve(0, -1, 1, -10, -20);
    expect(E, 11, "I5", 5, 1, 5);
    CHECK(tate_local_data(E, Prime(11)).data.reduction == ReductionKind::SplitMultiplicative);
}

TEST_CASE("additive golden values") {
    expect(curve(0, 0, 0, 0, 3), 3, "II", 5, 5, 1);
    expect(curve(0, 0, 0, -1, 0), 2, "III", 6, 5, 2);
    expect(curve(0, 0, 1, 0, 0), 3, "II", 3, 3, 1);
    expect(curve(0, 0, 1, 0, -7), 3, "IV*", 9, 3, 3);
}

TEST_CASE("singular input") {
    CHECK_THROWS_AS(tate_local_data(curve(0, 0, 0, 0, 0), Prime(2)), singular_model);
    CHECK_THROWS_AS(tate_local_data(curve(1, 0, 0, 0, 0), Prime(5)), singular_model);
}

TEST_CASE("non-minimal input restarts") {
    // Scale [0,-1,1,-10,-20] by u = 1/11: a_i pick up 11^i.
    WeierstrassModel E = curve(0, -1 * 121, 1331, -10 * 14641, -20 * 1771561);
    TateResult r = tate_local_data(E, Prime(11));
    CHECK(r.restarts == 1);
    CHECK(r.data.type.str() == "I5");
    CHECK(r.data.c == 5);
    CHECK(valuation(r.minimal_model.discriminant(), Prime(11)) == Val(5));
}

TEST_CASE("rational coefficients are cleared first") {
    WeierstrassModel E = curve(0, -1, 1, -10, -20);
    WeierstrassModel F = apply_isomorphism(E, {rat(5, 3), rat(2, 9), rat(1, 3), rat(4)});
    TateResult r = tate_local_data(F, Prime(11));
    CHECK(r.data == tate_local_data(E, Prime(11)).data);
}

TEST_CASE("isomorphism invariance of local data") {
    std::mt19937_64 rng(421);
    std::uniform_int_distribution<long> c(-8, 8);
    int done = 0;
    while (done < 60) {
        WeierstrassModel E = curve(c(rng), c(rng), c(rng), c(rng), c(rng));
        if (E.is_singular()) continue;
        long un = c(rng), ud = c(rng);
        if (un == 0 || ud == 0) continue;
        Isomorphism phi{rat(un, ud), rat(c(rng), 5), rat(c(rng)), rat(c(rng), 2)};
        WeierstrassModel F = apply_isomorphism(E, phi);
        for (long p : {2L, 3L, 5L}) {
            CHECK(tate_local_data(E, Prime(p)).data == tate_local_data(F, Prime(p)).data);
        }
        ++done;
    }
}

TEST_CASE("minimality idempotence") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<long> c(-10, 10);
    int done = 0;
    while (done < 80) {
        WeierstrassModel E = curve(c(rng), c(rng), c(rng), c(rng), c(rng));
        if (E.is_singular()) continue;
        for (long p : {2L, 3L}) {
            TateResult r = tate_local_data(E, Prime(p));
            TateResult r2 = tate_local_data(r.minimal_model, Prime(p));
            CHECK(r2.data == r.data);
            CHECK(r2.restarts == 0);
        }
        ++done;
    }
}

TEST_CASE("multiplicative splitness") {
    // p = 2: v(a1) = 0 and the singular point at the origin; split iff 2 | a2.
    CHECK(multiplicative_splitness(curve(1, 2, 0, 2, 4), Prime(2)) ==
          ReductionKind::SplitMultiplicative);
    CHECK(multiplicative_splitness(curve(1, 1, 0, 2, 4), Prime(2)) ==
          ReductionKind::NonsplitMultiplicative);
    CHECK(multiplicative_splitness(curve(0, 2, 0, 7, 7), Prime(7)) ==
          ReductionKind::SplitMultiplicative);
}

TEST_CASE("component counts") {
    CHECK(component_count(KodairaType::I(0)) == 1);
    CHECK(component_count(KodairaType::I(7)) == 7);
    CHECK(component_count(KodairaType::IStar(4)) == 9);
    CHECK(component_count(KodairaType::IIStar()) == 9);
    CHECK(component_count(KodairaType::IV()) == 3);
}

TEST_CASE("Kodaira symbols round trip") {
    for (const char* s : {"I0", "I5", "I12", "II", "III", "IV", "I0*", "I4*", "IV*", "III*",
                          "II*"})
        CHECK(KodairaType::parse(s).str() == s);
    CHECK_THROWS_AS(KodairaType::parse("V"), parse_error);
}
