#include <doctest.h>

#include "hg/errors.hpp"
#include "hg/frobenius.hpp"

using namespace hg;

namespace {

// generated by tools/gen_expected.py
constexpr i64 KAPPA_731 = 207576968;    // mod 7^10
constexpr i64 KAPPA_521 = 15322;        // mod 5^6
constexpr i64 KAPPA_1341 = 805612709;   // mod 13^8
constexpr i64 KAPPA_1331 = 388015093;   // mod 13^8
constexpr i64 TAU731_C1 = 7689604000;   // mod 7^12
constexpr i64 TAU731_C6 = 12396339723;  // mod 7^12
constexpr i64 TAU731_C11 = 12731384139; // mod 7^12
constexpr i64 TAU731_7C7 = 11581565906; // 7 * coefficient 7, mod 7^12
constexpr i64 UR_731_LAM3 = 26532;      // mod 7^6
constexpr i64 UR_521_LAM2 = 13488;      // mod 5^7
constexpr i64 UR_1341_LAM2 = 140857;    // ratio without sign, mod 13^5

SigmaLift unit_lift(const UnramifiedRing& R) {
    return SigmaLift(PadicScalar::from_int(R, 1));
}

SigmaLift shifted_lift(const UnramifiedRing& R) {
    return SigmaLift(PadicScalar::from_int(R, 1 + R.ctx.p));
}

} // namespace

TEST_CASE("period constant: frozen values and structure") {
    PrimeContext c7(7, 3, 12);
    UnramifiedRing R7(c7, 1);
    KappaResult k1 = kappa_constants(R7, 1);
    CHECK(k1.value.congruent(PadicScalar::from_int(R7, KAPPA_731), 10));
    CHECK(!k1.real_shape.empty());
    // the summand multiset is invariant under n -> N - n, so the values match
    KappaResult k2 = kappa_constants(R7, 2);
    CHECK(k2.value.congruent(k1.value, 10));

    PrimeContext c5(5, 2, 8);
    UnramifiedRing R5(c5, 1);
    KappaResult k5 = kappa_constants(R5, 1);
    CHECK(k5.value.congruent(PadicScalar::from_int(R5, KAPPA_521), 6));
    // N = 2 collapses to 4 log 2
    PadicScalar four_log2 =
        PadicScalar::from_int(R5, 4) * log_unit(PadicScalar::from_int(R5, 2));
    CHECK(k5.value.congruent(four_log2, 7));

    PrimeContext c13(13, 3, 10);
    UnramifiedRing R13a(c13, 1);
    CHECK(kappa_constants(R13a, 1).value.congruent(PadicScalar::from_int(R13a, KAPPA_1331), 8));
    PrimeContext c134(13, 4, 10);
    UnramifiedRing R13b(c134, 1);
    CHECK(kappa_constants(R13b, 1).value.congruent(PadicScalar::from_int(R13b, KAPPA_1341), 8));

    CHECK_THROWS_AS((void)kappa_constants(R7, 0), DomainError);
    CHECK_THROWS_AS((void)kappa_constants(R7, 3), DomainError);
}

TEST_CASE("period primitive: frozen coefficients and pole budget") {
    PrimeContext ctx(7, 3, 12);
    UnramifiedRing R(ctx, 1);
    HGSeries F = build_hg(R, 1, 64);
    TruncSeries tt = tau_tilde(F, 60);
    CHECK(tt.coeff(0).is_zero());
    CHECK(tt.coeff(1).congruent(PadicScalar::from_int(R, TAU731_C1), 12));
    CHECK(tt.coeff(6).congruent(PadicScalar::from_int(R, TAU731_C6), 12));
    CHECK(tt.coeff(11).congruent(PadicScalar::from_int(R, TAU731_C11), 12));
    // index 7 carries a genuine simple pole
    CHECK(tt.coeff(7).val_lower() == -1);
    CHECK(tt.coeff(7).mul_ppow(1).congruent(PadicScalar::from_int(R, TAU731_7C7), 11));

    // K weights: first one is 2 - 3/2 - 3 = -5/2
    CHECK(k_weight(R, 1, 1).congruent(PadicScalar::from_ratio(R, -5, 2), 12));
    CHECK(k_weight(R, 1, 0).is_zero());

    // independent construction through the K-weighted sum
    TruncSeries viaK = tau_series_via_K(F, 60);
    CHECK(tt.congruent(viaK, 10, 59));

    // a series with the wrong constant term has no primitive of this shape
    HGSeries bad = F;
    bad.series.set(0, PadicScalar::from_int(R, 2));
    CHECK_THROWS_AS((void)tau_tilde(bad, 30), NotIntegrable);
}

TEST_CASE("connection matrices: displayed entries and basis-change conjugation") {
    PrimeContext ctx(7, 3, 12);
    UnramifiedRing R(ctx, 1);
    const i32 L = 40, M = 12;
    for (i32 n = 1; n <= 2; ++n) {
        HGSeries F = build_hg(R, n, L);
        Mat2 C = gauss_manin_matrix(R, n, L);
        CHECK(C.a.min_val_lower(C.a.lo, C.a.L) >= M);
        CHECK(C.c.coeff(0).congruent(PadicScalar::from_ratio(R, n, 3), 12));
        CHECK(C.b.coeff(-1).congruent(PadicScalar::from_ratio(R, 3 - n, 3), 12));
        CHECK(C.d.coeff(-1).congruent(PadicScalar::from_int(R, -1), 12));

        Mat2 Ct = gauss_manin_matrix_tilde(F, L);
        CHECK(Ct.a.min_val_lower(Ct.a.lo, Ct.a.L) >= M);
        CHECK(Ct.b.min_val_lower(Ct.b.lo, Ct.b.L) >= M);
        CHECK(Ct.d.min_val_lower(Ct.d.lo, Ct.d.L) >= M);
        CHECK(Ct.c.coeff(-1).congruent(PadicScalar::from_int(R, -1), 12));

        Mat2 B = basis_change_matrix(F, L);
        Mat2 conj = B.inverse() * (C * B + B.derivative());
        CHECK(Ct.congruent(conj, M - 2, L - 4));
    }
}

TEST_CASE("frobenius matrix: constants, determinant, lift shift") {
    PrimeContext ctx(7, 3, 12);
    UnramifiedRing R(ctx, 1);
    const i32 L = 40, M = 12;
    SigmaLift l1 = unit_lift(R);
    SigmaLift l2 = shifted_lift(R);

    EigenComponent E1 = build_eigen_component(R, 1, l1, L);
    CHECK(E1.sign == 1);
    CHECK(E1.fij.a.coeff(0).congruent(PadicScalar::from_int(R, 1), M - 2));
    CHECK(E1.fij.c.coeff(0).is_zero());
    CHECK(E1.fij.c.coeff(1).rel_prec() > 0);
    // tau_sigma constant term is the period constant when a = 1
    CHECK(E1.tau_sig.coeff(0).congruent(PadicScalar::from_int(R, KAPPA_731), 10));

    // external determinant cross-check on the truncated entries
    TruncSeries det = E1.fij.a * E1.fij.d - E1.fij.b * E1.fij.c;
    TruncSeries res = det - det_target(R, l1, L);
    CHECK(res.zero_mod(M - 6, 33));

    EigenComponent E2 = build_eigen_component(R, 1, l2, L);
    // the lambda^p coefficient of tau_sigma shifts by -tau~_1 between the lifts
    PadicScalar shift = E2.tau_sig.coeff(7) - E1.tau_sig.coeff(7);
    CHECK(shift.congruent(PadicScalar::from_int(R, -TAU731_C1), 10));
    // and its constant term picks up p^{-1} log(1+p)
    PadicScalar c0diff = E2.tau_sig.coeff(0) - E1.tau_sig.coeff(0);
    CHECK(c0diff.congruent(log_1unit(l2.a).mul_ppow(-1), 10));

    // sign -1 family
    PrimeContext c134(13, 4, 10);
    UnramifiedRing R13(c134, 1);
    EigenComponent E3 = build_eigen_component(R13, 1, unit_lift(R13), 36);
    CHECK(E3.sign == -1);
    CHECK(E3.fij.a.coeff(0).congruent(PadicScalar::from_int(R13, -1), 8));
    EigenComponent E4 = build_eigen_component(R13, 2, unit_lift(R13), 36);
    CHECK(E4.sign == 1);
}

TEST_CASE("horizontality: residual vanishes, sign mutation is caught early") {
    PrimeContext ctx(7, 3, 12);
    UnramifiedRing R(ctx, 1);
    const i32 L = 40, M = 12;
    for (i32 n = 1; n <= 2; ++n)
        for (i32 which = 0; which < 2; ++which) {
            SigmaLift l = which ? shifted_lift(R) : unit_lift(R);
            EigenComponent E = build_eigen_component(R, n, l, L);
            Mat2 res = horizontality_residual(E, L);
            CHECK(res.zero_mod(M - 6, 30));

            EigenComponent bad = E;
            bad.fij.b = bad.fij.b.scaled(PadicScalar::from_int(R, -1));
            Mat2 bres = horizontality_residual(bad, L);
            CHECK(!bres.zero_mod(M - 6, 4));
        }
}

TEST_CASE("unit root: frozen values, powers, lift independence") {
    PrimeContext ctx(7, 3, 12);
    UnramifiedRing R(ctx, 1);
    SigmaLift l1 = unit_lift(R);
    PadicScalar alpha = teichmuller(R, 3);
    i32 prec = 0;
    PadicScalar u1 = dwork_unit_root(R, 1, alpha, 1, l1, &prec);
    CHECK(prec == 7);
    CHECK(u1.is_unit());
    CHECK(u1.congruent(PadicScalar::from_int(R, UR_731_LAM3), 6));
    // the two eigen-indices share one series, hence one root
    PadicScalar u2 = dwork_unit_root(R, 2, alpha, 1, l1);
    CHECK(u2.congruent(u1, 7));
    // r = 2 telescopes to the square when the point is sigma-fixed
    PadicScalar usq = dwork_unit_root(R, 1, alpha, 2, l1);
    CHECK(usq.congruent(u1 * u1, 7));

    // lift-adjusted point gives the same root
    SigmaLift l2 = shifted_lift(R);
    PadicScalar adj =
        exp_small(log_1unit(l2.a) * PadicScalar::from_ratio(R, 1, 1 - 7));
    PadicScalar alpha2 = alpha * adj;
    PadicScalar u1b = dwork_unit_root(R, 1, alpha2, 1, l2);
    CHECK(u1b.congruent(u1, 6));

    PrimeContext c5(5, 2, 8);
    UnramifiedRing R5(c5, 1);
    PadicScalar w2 = teichmuller(R5, 2);
    PadicScalar v = dwork_unit_root(R5, 1, w2, 1, unit_lift(R5), &prec);
    CHECK(prec == 8);
    CHECK(v.congruent(PadicScalar::from_int(R5, UR_521_LAM2), 7));

    // negative prefactor at (13, 4), n = 1
    PrimeContext c13(13, 4, 10);
    UnramifiedRing R13(c13, 1);
    PadicScalar w = teichmuller(R13, 2);
    PadicScalar u13 = dwork_unit_root(R13, 1, w, 1, unit_lift(R13), &prec);
    CHECK(prec == 5);
    CHECK(u13.congruent(PadicScalar::from_int(R13, -UR_1341_LAM2), 5));

    // rejections
    CHECK_THROWS_AS((void)dwork_unit_root(R, 1, teichmuller(R, 1), 1, l1), DomainError);
    CHECK_THROWS_AS((void)dwork_unit_root(R, 1, PadicScalar::from_int(R, 7), 1, l1),
                    DomainError);
    CHECK_THROWS_AS((void)dwork_unit_root(R, 1, alpha2, 1, l1), DomainError);
    CHECK_THROWS_AS((void)dwork_unit_root(R13, 1, teichmuller(R13, 7), 1, unit_lift(R13)),
                    NonOrdinary);
}
