#include <doctest.h>

#include <array>
#include <vector>

#include "hg/errors.hpp"
#include "hg/fiber.hpp"

using namespace hg;

namespace {

PadicScalar scalar_u64(const UnramifiedRing& R, u64 v, i32 prec) {
    UnramifiedRing::Elt e{};
    e[0] = v;
    return PadicScalar(R, e, prec);
}

void check_close(const PadicScalar& s, const PadicScalar& t, i32 digits) {
    REQUIRE(s.prec >= digits);
    REQUIRE(t.prec >= digits);
    CHECK(s.congruent(t, digits));
}

void check_small(const PadicScalar& s, i32 digits) {
    REQUIRE(s.prec >= digits);
    CHECK(s.congruent(PadicScalar::zero(*s.R, s.prec), digits));
}

// minimum valuation of A - B across all blocks
i32 diff_vp(const FiberContext& C, const FiberRat& A, const FiberRat& B) {
    FiberRat d = A;
    rat_add_into(C, d, B, C.pW - 1);
    return rat_min_vp(C, d);
}

FiberRat dense_rat_a() {
    return FiberRat{{1, 2, 3}, {4, 0, 1}, {2, 3}, {1, 1}, {{1, 2}, {3, 1}}};
}
FiberRat dense_rat_b() {
    return FiberRat{{2, 1}, {1, 2}, {0, 4}, {2}, {{0, 1}}};
}

} // namespace

TEST_CASE("fiber block products agree with pointwise evaluation") {
    PrimeContext P(5, 2, 18);
    UnramifiedRing R(P, 1);
    FiberContext C(R, 3);
    FiberRat F = dense_rat_a(), G = dense_rat_b();
    FiberRat H = rat_mul(C, F, G);
    for (u64 x0 : {u64(3), u64(4)}) {
        u64 lhs = rat_eval(C, H, x0);
        u64 rhs = C.mul(rat_eval(C, F, x0), rat_eval(C, G, x0));
        CHECK(C.vp(C.sub(lhs, rhs)) >= C.floorv);
    }

    // associativity through evaluation
    FiberRat FG_F = rat_mul(C, H, F);
    FiberRat F_GF = rat_mul(C, F, rat_mul(C, G, F));
    for (u64 x0 : {u64(3), u64(4)})
        CHECK(C.vp(C.sub(rat_eval(C, FG_F, x0), rat_eval(C, F_GF, x0))) >= C.floorv - 1);
}

TEST_CASE("fiber derivative obeys the product rule") {
    PrimeContext P(5, 2, 18);
    UnramifiedRing R(P, 1);
    FiberContext C(R, 3);
    FiberRat F = dense_rat_a(), G = dense_rat_b();
    FiberRat lhs = rat_derivative(C, rat_mul(C, F, G));
    FiberRat rhs = rat_mul(C, rat_derivative(C, F), G);
    rat_add_into(C, rhs, rat_mul(C, F, rat_derivative(C, G)));
    CHECK(diff_vp(C, lhs, rhs) >= C.floorv - 1);
}

TEST_CASE("fiber sigma matches substitution and the y-lift closes") {
    PrimeContext P(5, 2, 18);
    UnramifiedRing R(P, 1);
    for (i64 la : {i64(1), i64(6)}) {
        CAPTURE(la);
        FiberContext C(R, 3, la);
        FiberRat F{{1, 2}, {3}, {1, 2}, {2}, {{1, 1}, {0, 2}}};
        FiberRat S = rat_sigma(C, F);
        for (u64 x0 : {u64(3), u64(4)}) {
            u64 x1 = C.mul(C.a, powmod(x0, (u64)C.p, C.pW));
            CHECK(C.vp(C.sub(rat_eval(C, S, x0), rat_eval(C, F, x1))) >= C.floorv - 1);
        }

        FiberRat frat;
        frat.poly = C.fpoly();
        FiberRat lhs = rat_mul(C, C.y_lift_pow((i32)C.N), frat);
        for (u64 x0 : {u64(3), u64(4)}) {
            u64 x1 = C.mul(C.a, powmod(x0, (u64)C.p, C.pW));
            u64 want = rat_eval(C, frat, x1);
            CHECK(C.vp(C.sub(rat_eval(C, lhs, x0), want)) >= C.floorv - 2);
        }
    }
}

TEST_CASE("fiber reduction fixes the basis forms") {
    PrimeContext P(5, 2, 18);
    UnramifiedRing R(P, 1);
    FiberContext C(R, 3);
    RegulatorVector rw = reduce_to_basis(C, basis_form(C, 1, false));
    check_close(rw.c_omega[0], PadicScalar::from_int(R, 1), 8);
    check_small(rw.c_eta[0], 8);
    RegulatorVector re = reduce_to_basis(C, basis_form(C, 1, true));
    check_small(re.c_omega[0], 8);
    check_close(re.c_eta[0], PadicScalar::from_int(R, 1), 8);

    FiberForm combo = basis_form(C, 1, false);
    for (auto& r : combo.wc) r = rat_scale(C, r, 3);
    form_add_into(C, combo, basis_form(C, 1, true), 7);
    RegulatorVector rc = reduce_to_basis(C, combo);
    check_close(rc.c_omega[0], PadicScalar::from_int(R, 3), 8);
    check_close(rc.c_eta[0], PadicScalar::from_int(R, 7), 8);
}

TEST_CASE("fiber reduction kills exact forms and flags residues") {
    PrimeContext P(5, 2, 18);
    UnramifiedRing R(P, 1);
    FiberContext C(R, 3);
    FiberRat G{{2, 1, 4}, {1, 2}, {3}, {2}, {{1, 3}, {2, 0}}};
    for (i32 n = 0; n < 2; ++n) {
        CAPTURE(n);
        RegulatorVector r = reduce_to_basis(C, exact_form(C, n, G));
        check_small(r.c_omega[0], 6);
        check_small(r.c_eta[0], 6);
    }

    FiberRat polelog;  // dx/x has a residue at 0
    polelog.p0 = {1};
    CHECK_THROWS_AS(reduce_to_basis(C, monomial_form(C, 0, polelog)), ResidueError);
    FiberRat qpole;  // dx/q has residues at the conjugate q-roots
    qpole.pq = {{1, 0}};
    CHECK_THROWS_AS(reduce_to_basis(C, monomial_form(C, 1, qpole)), ResidueError);
}

TEST_CASE("fiber reduction projects x dx/y onto (1, alpha - 1)") {
    PrimeContext P(5, 2, 18);
    UnramifiedRing R(P, 1);
    for (i64 ar : {i64(2), i64(3)}) {
        CAPTURE(ar);
        FiberContext C(R, ar);
        FiberRat T;
        T.poly = {0, 1};
        RegulatorVector r = reduce_to_basis(C, monomial_form(C, 1, T));
        check_close(r.c_omega[0], PadicScalar::from_int(R, 1), 8);
        check_close(r.c_eta[0], scalar_u64(R, C.sub(C.alpha, 1), C.W), 8);
    }
}

TEST_CASE("fiber symbol classes are antisymmetric and kill Steinberg pairs") {
    PrimeContext P(5, 2, 18);
    UnramifiedRing R(P, 1);
    FiberContext C(R, 2);
    SymbolChoice zs = make_symbol(R, 1, 0);

    FiberSymbol s12{FiberFn::H1, FiberFn::H2, zs, PadicScalar()};
    FiberSymbol s21{FiberFn::H2, FiberFn::H1, zs, PadicScalar()};
    RegulatorVector v12 = fiber_regulator(C, s12);
    RegulatorVector v21 = fiber_regulator(C, s21);
    check_small(v12.c_omega[0] + v21.c_omega[0], 6);
    check_small(v12.c_eta[0] + v21.c_eta[0], 6);

    // swapping the roots inverts the first entry, so the class flips sign
    SymbolChoice zs2 = make_symbol(R, 0, 1);
    FiberSymbol s12b{FiberFn::H1, FiberFn::H2, zs2, PadicScalar()};
    RegulatorVector v12b = fiber_regulator(C, s12b);
    check_small(v12.c_omega[0] + v12b.c_omega[0], 6);
    check_small(v12.c_eta[0] + v12b.c_eta[0], 6);

    FiberSymbol s11{FiberFn::H1, FiberFn::H1, zs, PadicScalar()};
    RegulatorVector v11 = fiber_regulator(C, s11);
    check_small(v11.c_omega[0], 6);
    check_small(v11.c_eta[0], 6);

    FiberSymbol s22{FiberFn::H2, FiberFn::H2, zs, PadicScalar()};
    RegulatorVector v22 = fiber_regulator(C, s22);
    check_small(v22.c_omega[0], 6);
    check_small(v22.c_eta[0], 6);
}

TEST_CASE("fiber constant symbols split by Teichmuller part") {
    PrimeContext P(5, 2, 18);
    UnramifiedRing R(P, 1);
    FiberContext C(R, 2);
    SymbolChoice zs = make_symbol(R, 1, 0);

    PadicScalar tc = scalar_u64(R, R.teichmuller_elt(R.from_int(3))[0], C.W);
    FiberSymbol sc{FiberFn::ConstUnit, FiberFn::H2, zs, tc};
    RegulatorVector vc = fiber_regulator(C, sc);
    check_small(vc.c_omega[0], 10);
    check_small(vc.c_eta[0], 10);

    // 3 = omega(3) * (1-unit) with a nontrivial 1-unit part, so the
    // integrand keeps a genuine dx/x residue
    FiberSymbol sbad{FiberFn::ConstUnit, FiberFn::H2, zs, PadicScalar::from_int(R, 3)};
    CHECK_THROWS_AS(fiber_regulator(C, sbad), ResidueError);
}

TEST_CASE("fiber regulator does not depend on the x-lift parameter") {
    PrimeContext P(5, 2, 18);
    UnramifiedRing R(P, 1);
    SymbolChoice zs = make_symbol(R, 1, 0);
    FiberSymbol s12{FiberFn::H1, FiberFn::H2, zs, PadicScalar()};
    for (i64 ar : {i64(2), i64(3), i64(4)}) {
        CAPTURE(ar);
        FiberContext Ca(R, ar, 1), Cb(R, ar, 6);
        RegulatorVector va = fiber_regulator(Ca, s12);
        RegulatorVector vb = fiber_regulator(Cb, s12);
        check_close(va.c_omega[0], vb.c_omega[0], 6);
        check_close(va.c_eta[0], vb.c_eta[0], 6);
    }
}

TEST_CASE("fiber regulator is stable under deeper truncation") {
    PrimeContext P(5, 2, 18);
    UnramifiedRing R(P, 1);
    SymbolChoice zs = make_symbol(R, 1, 0);
    FiberSymbol s12{FiberFn::H1, FiberFn::H2, zs, PadicScalar()};
    FiberContext C(R, 2);
    RegulatorVector v = fiber_regulator(C, s12);

    FiberContext Cdeep(R, 2, 1, 0, 2 * C.kmax);
    RegulatorVector vd = fiber_regulator(Cdeep, s12);
    check_close(v.c_omega[0], vd.c_omega[0], 6);
    check_close(v.c_eta[0], vd.c_eta[0], 6);

    FiberContext Clow(R, 2, 1, 11);
    RegulatorVector vl = fiber_regulator(Clow, s12);
    check_close(v.c_omega[0], vl.c_omega[0], 6);
    check_close(v.c_eta[0], vl.c_eta[0], 6);
}

TEST_CASE("fiber cubic curve keeps the symbol antisymmetry") {
    PrimeContext P(7, 3, 18);
    UnramifiedRing R(P, 1);
    FiberContext C(R, 3);
    SymbolChoice zs = make_symbol(R, 1, 0);
    FiberSymbol s12{FiberFn::H1, FiberFn::H2, zs, PadicScalar()};
    FiberSymbol s21{FiberFn::H2, FiberFn::H1, zs, PadicScalar()};
    RegulatorVector v12 = fiber_regulator(C, s12);
    RegulatorVector v21 = fiber_regulator(C, s21);
    REQUIRE(v12.c_omega.size() == 2);
    for (size_t n = 0; n < 2; ++n) {
        CAPTURE(n);
        check_small(v12.c_omega[n] + v21.c_omega[n], 5);
        check_small(v12.c_eta[n] + v21.c_eta[n], 5);
    }
}
