#include <doctest.h>

#include <vector>

#include "hg/errors.hpp"
#include "hg/hgfun.hpp"
#include "hg/pointcount.hpp"

using namespace hg;

namespace {

// generated by tools/gen_expected.py (brute-force python side)
constexpr i64 AFF_731_Q = 3;
constexpr i64 AFF_731_Q2 = 69;
constexpr i64 TRACE_731 = 2;
constexpr i64 PC_ROOT_731 = 259560226;     // mod 7^12
constexpr i64 TRACE_521 = -2;
constexpr i64 PC_ROOT_521 = 2513488;       // mod 5^10
constexpr i64 PC_ROOT_522 = 4738644;       // mod 5^10, q = 25
constexpr i64 AFF_521_Q = 7;
constexpr i64 AFF_522_Q = 31;
constexpr i64 AFF_522_Q2 = 639;
constexpr i64 PC_ROOT_1341 = 47043053536;  // mod 13^10
constexpr i64 AFF_1347_Q = 19;

} // namespace

TEST_CASE("finite field tables") {
    SmallField F7(7, 1);
    CHECK(F7.g == 3);
    CHECK(F7.expt[1] == 3);
    CHECK(F7.dlog[3] == 1);
    CHECK(F7.one_minus[3] == 5);

    SmallField F49(7, 2);
    CHECK(F49.minpoly == std::vector<i32>{1, 0});
    CHECK(F49.g == 9);
    CHECK(F49.pow(F49.g, 48) == 1);
    CHECK(F49.pow(F49.g, 24) != 1);
    CHECK(F49.pow(F49.g, 16) != 1);
    for (u32 x = 0; x < F49.size; ++x) {
        CHECK(F49.one_minus[F49.one_minus[x]] == x);
        CHECK(F49.add(F49.one_minus[x], x) == 1);
        if (x) CHECK(F49.mul_t(x, F49.inv(x)) == 1);
        CHECK(F49.mul(x, 8) == F49.mul_t(x, 8));
    }

    SmallField F25(5, 2);
    CHECK(F25.minpoly == std::vector<i32>{2, 0});
    SmallField F625(5, 4);
    CHECK(F625.minpoly == std::vector<i32>{2, 0, 0, 0});

    CHECK_THROWS_AS(SmallField(8, 1), DomainError);
    CHECK_THROWS_AS(SmallField(1429, 2), DomainError); // table cap
    CHECK_THROWS_AS(SmallField(7, 1, 2), DomainError); // 2 has order 3 mod 7
}

TEST_CASE("cyclotomic integer arithmetic") {
    CycInt z3 = CycInt::zeta_pow(3, 1);
    CHECK(z3 + CycInt::zeta_pow(3, 2) == CycInt(3, -1));
    CHECK(z3 * z3 * z3 == CycInt(3, 1));
    CHECK(CycInt::zeta_pow(4, 2) == CycInt(4, -1));
    CHECK(CycInt::zeta_pow(4, 1).conj() == CycInt::zeta_pow(4, 3));
    CHECK((CycInt(4) - CycInt::zeta_pow(4, 1)) == CycInt::zeta_pow(4, 1).scaled(-1));

    CycInt a = CycInt(3, 6) + z3.scaled(9);
    CHECK(a.divisible(3));
    CHECK(!a.divisible(4));
    CHECK(a.divided(3) == CycInt(3, 2) + z3.scaled(3));
    CHECK(!a.is_rational());
    CHECK(CycInt(3, 5).rational() == 5);
    CHECK(z3.residue_at(2, 7) == 2);
    CHECK(a.residue_at(2, 7) == (6 + 9 * 2) % 7);

    CycInt b = CycInt(4, 3) + CycInt::zeta_pow(4, 1).scaled(4);
    CHECK(b.abs_embedding(1) == doctest::Approx(5.0));
    CHECK(b.abs_embedding(3) == doctest::Approx(5.0));

    PrimeContext ctx(7, 3, 12);
    UnramifiedRing R(ctx, 1);
    CHECK(CycInt(3, 5).embed(R, 2).congruent(PadicScalar::from_int(R, 5), 12));
    // zeta + zeta^2 = -1 must survive embedding at a genuine cube root of 1
    PadicScalar e = (z3 + CycInt::zeta_pow(3, 2)).embed(R, 2);
    CHECK(e.congruent(PadicScalar::from_int(R, -1), 12));
}

TEST_CASE("reference instance: counts, sums, charpoly") {
    CurveInstance cv(7, 3, 1, 3);
    CHECK(cv.w1 == 2);
    CHECK(cv.m2 == 2);
    CHECK(cv.cnt[0] == std::vector<i64>{0, 2, 2});
    CHECK(cv.cnt[1] == std::vector<i64>{22, 12, 12});

    CHECK(brute_affine_count(cv, 1) == AFF_731_Q);
    CHECK(brute_affine_count(cv, 2) == AFF_731_Q2);

    // independent nested loop in plain integers mod 7
    i64 naive = 0;
    for (i64 x = 0; x < 7; ++x)
        for (i64 y = 0; y < 7; ++y) {
            i64 rhs = x * (1 - x) * (1 - x) * (1 - 3 * x);
            if (((y * y * y - rhs) % 7 + 7) % 7 == 0) ++naive;
        }
    CHECK(naive == AFF_731_Q);

    CHECK(character_sum(cv, 1, 1) == CycInt(3, -TRACE_731));
    CHECK(character_sum(cv, 1, 2) == CycInt(3, 10));
    CHECK(character_sum(cv, 2, 1) == character_sum(cv, 1, 1).conj());
    CHECK(character_sum(cv, 2, 2) == character_sum(cv, 1, 2).conj());
    CHECK_THROWS_AS((void)character_sum(cv, 3, 1), DomainError);
    CHECK_THROWS_AS((void)character_sum(cv, 1, 3), DomainError);

    for (i32 n = 1; n <= 2; ++n) {
        ComponentCharPoly cp = component_charpoly(cv, n);
        CHECK(cp.trace == CycInt(3, TRACE_731));
        CHECK(cp.norm == CycInt(3, 7));
        CHECK(!cp.supersingular);
    }
    CHECK(smooth_count_from_charpolys(cv, 1) == AFF_731_Q + 1);
    CHECK(smooth_count_from_charpolys(cv, 2) == AFF_731_Q2 + 1);

    // a different generator changes the tables but not the sums
    CurveInstance cv2(7, 3, 1, 3, 5);
    CHECK(character_sum(cv2, 1, 1) == character_sum(cv, 1, 1));
    CHECK(character_sum(cv2, 1, 2) == character_sum(cv, 1, 2));
    CHECK(component_charpoly(cv2, 1).trace == CycInt(3, TRACE_731));

    CHECK_THROWS_AS(CurveInstance(7, 5, 1, 3), UnsupportedExtension);
    CHECK_THROWS_AS(CurveInstance(7, 3, 1, 8), DomainError);
    CHECK_THROWS_AS(CurveInstance(7, 3, 1, 14), DomainError);
    CHECK_THROWS_AS(CurveInstance(13, 4, 3, 2), DomainError);
}

TEST_CASE("unit root verification against the limit formula") {
    PrimeContext c7(7, 3, 12);
    UnramifiedRing R7(c7, 1);
    SigmaLift l7(PadicScalar::from_int(R7, 1));
    CurveInstance cv(7, 3, 1, 3);
    for (i32 n = 1; n <= 2; ++n) {
        UnitRootReport rep = verify_unit_root(cv, n, teichmuller(R7, 3), 1, l7);
        CHECK(rep.match);
        CHECK(rep.compared_digits == 7);
        CHECK(rep.agreement_digits == 7);
        CHECK(rep.pc_root.congruent(PadicScalar::from_int(R7, PC_ROOT_731), 12));
    }
    CHECK_THROWS_AS((void)verify_unit_root(cv, 1, teichmuller(R7, 3), 2, l7), DomainError);
    CHECK_THROWS_AS((void)verify_unit_root(cv, 1, teichmuller(R7, 4), 1, l7), DomainError);

    PrimeContext c5(5, 2, 10);
    UnramifiedRing R5(c5, 1);
    SigmaLift l5(PadicScalar::from_int(R5, 1));
    CurveInstance cv5(5, 2, 1, 2);
    CHECK(cv5.cnt[0] == std::vector<i64>{2, 0});
    CHECK(brute_affine_count(cv5, 1) == AFF_521_Q);
    UnitRootReport r1 = verify_unit_root(cv5, 1, teichmuller(R5, 2), 1, l5);
    CHECK(component_charpoly(cv5, 1).trace == CycInt(2, TRACE_521));
    CHECK(r1.pc_root.congruent(PadicScalar::from_int(R5, PC_ROOT_521), 10));
    CHECK(r1.agreement_digits == 8);

    CurveInstance cv25(5, 2, 2, 2);
    CHECK(brute_affine_count(cv25, 1) == AFF_522_Q);
    CHECK(brute_affine_count(cv25, 2) == AFF_522_Q2);
    UnitRootReport r2 = verify_unit_root(cv25, 1, teichmuller(R5, 2), 2, l5);
    CHECK(r2.pc_root.congruent(PadicScalar::from_int(R5, PC_ROOT_522), 10));
    // the q = 25 root is the square of the q = 5 root (curve defined over F_5)
    CHECK(r2.pc_root.congruent(r1.pc_root * r1.pc_root, 10));

    PrimeContext c13(13, 4, 10);
    UnramifiedRing R13(c13, 1);
    SigmaLift l13(PadicScalar::from_int(R13, 1));
    CurveInstance cv13(13, 4, 1, 2);
    UnitRootReport r13 = verify_unit_root(cv13, 1, teichmuller(R13, 2), 1, l13);
    CHECK(r13.pc_root.congruent(PadicScalar::from_int(R13, PC_ROOT_1341), 10));
    CHECK(r13.compared_digits == 5);
}

TEST_CASE("supersingular detection matches the truncated sum criterion") {
    CurveInstance ss(13, 4, 1, 7);
    CHECK(brute_affine_count(ss, 1) == AFF_1347_Q);
    CHECK(component_charpoly(ss, 1).supersingular);
    CHECK(!component_charpoly(ss, 2).supersingular);
    CHECK(component_charpoly(ss, 3).supersingular);
    CHECK(hyp_trunc_modp(13, 4, 1, 7) == 0);
    CHECK(hyp_trunc_modp(13, 4, 3, 7) == 0);
    CHECK(hyp_trunc_modp(13, 4, 2, 7) != 0);

    PrimeContext c13(13, 4, 10);
    UnramifiedRing R13(c13, 1);
    SigmaLift l13(PadicScalar::from_int(R13, 1));
    CHECK_THROWS_AS((void)verify_unit_root(ss, 1, teichmuller(R13, 7), 1, l13), NonOrdinary);
    CHECK_THROWS_AS((void)dwork_unit_root(R13, 1, teichmuller(R13, 7), 1, l13), NonOrdinary);

    // ordinary everywhere at p=7, and the two criteria agree residue by residue
    PrimeContext c7(7, 3, 8);
    UnramifiedRing R7(c7, 1);
    for (i64 lam = 2; lam <= 6; ++lam) {
        CurveInstance cv(7, 3, 1, lam);
        for (i32 n = 1; n <= 2; ++n) {
            bool ss_pc = component_charpoly(cv, n).supersingular;
            bool ss_hg = hyp_trunc_modp(7, 3, n, lam) == 0;
            CHECK(ss_pc == ss_hg);
            CHECK(!ss_pc);
        }
        // the truncated sum here is the series evaluation mod p
        PadicScalar v = hg_truncated_value(R7, 1, teichmuller(R7, lam), 7);
        CHECK(v.congruent(PadicScalar::from_int(R7, hyp_trunc_modp(7, 3, 1, lam)), 1));
    }
}
