#include "hg/series.hpp"

#include <random>

#include "doctest.h"
#include "hg/errors.hpp"

using namespace hg;

namespace {

TruncSeries random_series(const UnramifiedRing& R, std::mt19937_64& rng, i32 lo, i32 L) {
    TruncSeries f(R, lo, L, false);
    for (i32 e = lo; e < L; ++e)
        f.set(e, PadicScalar::from_int(R, (i64)(rng() % 2000) - 1000));
    return f;
}

} // namespace

TEST_CASE("series ring axioms") {
    PrimeContext ctx(5, 2, 8);
    UnramifiedRing R(ctx, 1);
    std::mt19937_64 rng(12345);
    const i32 L = 40;
    for (int it = 0; it < 5; ++it) {
        TruncSeries f = random_series(R, rng, 0, L);
        TruncSeries g = random_series(R, rng, 0, L);
        TruncSeries h = random_series(R, rng, 0, L);
        CHECK((f + g).congruent(g + f, 8, L));
        CHECK((f * g).congruent(g * f, 8, L));
        CHECK(((f + g) + h).congruent(f + (g + h), 8, L));
        CHECK(((f * g) * h).congruent(f * (g * h), 8, L));
        CHECK((f * (g + h)).congruent(f * g + f * h, 8, L));
        CHECK((f * TruncSeries::one(R, L)).congruent(f, 8, L));
        CHECK((f - f).zero_mod(8, L));
    }
}

TEST_CASE("geometric series is the inverse of 1 - lambda") {
    PrimeContext ctx(7, 3, 12);
    UnramifiedRing R(ctx, 1);
    const i32 L = 50;
    TruncSeries om = one_minus_lambda(R, L);
    TruncSeries geo = geometric_series(R, L);
    CHECK(om.inverse().congruent(geo, 12, L));
    CHECK((om * geo).congruent(TruncSeries::one(R, L), 12, L));
}

TEST_CASE("laurent inversion and the unit-leading-coefficient gate") {
    PrimeContext ctx(5, 2, 8);
    UnramifiedRing R(ctx, 1);
    const i32 L = 30;
    TruncSeries lam = lambda_series(R, L);
    TruncSeries li = lam.inverse();
    CHECK(li.lo == -1);
    CHECK((lam * li).congruent(TruncSeries::one(R, L - 1), 8, L - 2));

    // lambda - lambda^2 starts with a zero slot; inversion trims it
    TruncSeries f(R, 0, L, true);
    f.set(1, PadicScalar::from_int(R, 1));
    f.set(2, PadicScalar::from_int(R, -1));
    TruncSeries fi = f.inverse();
    CHECK(fi.lo == -1);
    CHECK((f * fi).congruent(TruncSeries::one(R, L - 2), 8, L - 2));
    // 1/(lambda - lambda^2) = lambda^-1 + 1 + lambda + ...
    CHECK(fi.coeff(-1).congruent(PadicScalar::from_int(R, 1), 8));
    CHECK(fi.coeff(0).congruent(PadicScalar::from_int(R, 1), 8));
    CHECK(fi.coeff(5).congruent(PadicScalar::from_int(R, 1), 8));

    TruncSeries g(R, 0, L, false);
    g.set(0, PadicScalar::from_int(R, 5)); // leading coefficient p
    g.set(1, PadicScalar::from_int(R, 1));
    CHECK_THROWS_AS((void)g.inverse(), NotInvertible);
}

TEST_CASE("derivative and primitive") {
    PrimeContext ctx(5, 2, 8);
    UnramifiedRing R(ctx, 1);
    std::mt19937_64 rng(777);
    TruncSeries f = random_series(R, rng, 0, 30);

    PadicScalar c0 = PadicScalar::from_int(R, 42);
    TruncSeries F = f.primitive(c0);
    CHECK(F.coeff(0).congruent(c0, 8));
    // k+1 may have p-valuation up to 2 in this window
    CHECK(F.derivative().congruent(f, 6, 30));

    // integrating the geometric series divides by p at lambda^p
    TruncSeries geo = geometric_series(R, 50);
    TruncSeries G = geo.primitive(PadicScalar::zero(R));
    CHECK(G.coeff(5).val_lower() == -1);
    CHECK(G.coeff(5).rel_prec() == 8);
    CHECK(G.coeff(5).congruent(PadicScalar::from_ratio(R, 1, 5), 7));

    // residue obstruction
    TruncSeries pole = TruncSeries::monomial(R, PadicScalar::from_int(R, 1), -1, 5);
    CHECK_THROWS_AS((void)pole.primitive(PadicScalar::zero(R)), NotIntegrable);
    // a pole of order 2 with no residue integrates fine
    TruncSeries pole2 = TruncSeries::monomial(R, PadicScalar::from_int(R, 3), -2, 5);
    TruncSeries P2 = pole2.primitive(PadicScalar::zero(R));
    CHECK(P2.coeff(-1).congruent(PadicScalar::from_int(R, -3), 8));
}

TEST_CASE("sigma substitution: shapes and ring homomorphism") {
    PrimeContext ctx(5, 2, 8);
    UnramifiedRing R(ctx, 2);
    PrimeContext ctx1(5, 2, 8);
    UnramifiedRing R1(ctx1, 1);
    SigmaLift lift(PadicScalar::from_int(R1, 6)); // a = 1 + p
    PadicScalar g(R, R.gen(), 8);

    std::mt19937_64 rng(4242);
    auto rand_ext = [&](i32 lo, i32 L) {
        TruncSeries f(R, lo, L, false);
        for (i32 e = lo; e < L; ++e) {
            PadicScalar c = PadicScalar::from_int(R, (i64)(rng() % 500)) +
                            g * PadicScalar::from_int(R, (i64)(rng() % 500));
            f.set(e, c);
        }
        return f;
    };

    TruncSeries f = rand_ext(0, 20);
    TruncSeries h = rand_ext(0, 20);
    TruncSeries sf = sigma_substitute(f, lift);
    CHECK(sf.L == 100);
    CHECK(sigma_substitute(f * h, lift).congruent(sf * sigma_substitute(h, lift), 8, 100));
    CHECK(sigma_substitute(f + h, lift).congruent(sf + sigma_substitute(h, lift), 8, 100));

    // constants map through the coefficient frobenius
    TruncSeries cst = TruncSeries::monomial(R, g, 0, 4);
    CHECK(sigma_substitute(cst, lift).coeff(0).congruent(g.sigma(1), 8));

    // lambda itself maps to a lambda^p
    TruncSeries lam = lambda_series(R, 4);
    TruncSeries slam = sigma_substitute(lam, lift);
    CHECK(slam.coeff(5).congruent(PadicScalar::from_int(R, 6), 8));
    CHECK(slam.coeff(3).is_zero());

    // a = 1 sends 1/(1-lambda) to sum of lambda^(5i)
    SigmaLift triv(PadicScalar::from_int(R1, 1));
    TruncSeries geo = geometric_series(R, 20);
    TruncSeries sgeo = sigma_substitute(geo, triv);
    for (i32 e = 0; e < 100; ++e) {
        if (e % 5 == 0)
            CHECK(sgeo.coeff(e).congruent(PadicScalar::from_int(R, 1), 8));
        else
            CHECK(sgeo.coeff(e).is_zero());
    }

    // truncation cap bookkeeping
    TruncSeries scap = sigma_substitute(f, lift, 60);
    CHECK(scap.L == 60);
    CHECK(scap.congruent(sf.truncated(60), 8, 60));
}

TEST_CASE("sigma substitution chain rule") {
    PrimeContext ctx(5, 2, 8);
    UnramifiedRing R(ctx, 1);
    SigmaLift lift(PadicScalar::from_int(R, 6));
    std::mt19937_64 rng(99);
    TruncSeries f = random_series(R, rng, 0, 20);

    TruncSeries lhs = sigma_substitute(f, lift).derivative();
    PadicScalar apfac = lift.a * PadicScalar::from_int(R, 5);
    TruncSeries jac = TruncSeries::monomial(R, apfac, 4, 6);
    TruncSeries rhs = jac * sigma_substitute(f.derivative(), lift);
    CHECK(lhs.congruent(rhs, 8, 99));
}

TEST_CASE("sigma lift validation") {
    PrimeContext ctx(5, 2, 8);
    UnramifiedRing R1(ctx, 1);
    CHECK_NOTHROW(SigmaLift(PadicScalar::from_int(R1, 1)));
    CHECK_NOTHROW(SigmaLift(PadicScalar::from_int(R1, 6)));
    CHECK_THROWS_AS(SigmaLift(PadicScalar::from_int(R1, 2)), DomainError);
    CHECK_THROWS_AS(SigmaLift(PadicScalar::from_int(R1, 5)), DomainError);
    UnramifiedRing R2(ctx, 2);
    CHECK_THROWS_AS(SigmaLift(PadicScalar::from_int(R2, 6)), DomainError);

    // prime mismatch between lift and series
    PrimeContext ctx7(7, 3, 8);
    UnramifiedRing R7(ctx7, 1);
    SigmaLift lift7(PadicScalar::from_int(R7, 8));
    TruncSeries f = geometric_series(R1, 10);
    CHECK_THROWS_AS((void)sigma_substitute(f, lift7), DomainError);
}

TEST_CASE("series evaluation") {
    PrimeContext ctx(5, 2, 8);
    UnramifiedRing R(ctx, 1);
    const i32 L = 60;
    TruncSeries geo = geometric_series(R, L);

    // small disk: geometric sums to 1/(1-alpha)
    PadicScalar a5 = PadicScalar::from_int(R, 5);
    PadicScalar v = geo.evaluate(a5);
    CHECK(v.congruent(PadicScalar::from_ratio(R, 1, -4), 8));

    PadicScalar a50 = PadicScalar::from_int(R, 50);
    CHECK(geo.evaluate(a50).congruent(PadicScalar::from_ratio(R, 1, -49), 8));

    // evaluation at exact zero picks out the constant term
    CHECK(geo.evaluate(PadicScalar::zero(R)).congruent(PadicScalar::from_int(R, 1), 8));

    // unit points are rejected for truncations
    CHECK_THROWS_AS((void)geo.evaluate(PadicScalar::from_int(R, 2)), EvaluationDomainError);

    // polynomials evaluate anywhere, exactly
    TruncSeries om = one_minus_lambda(R, 4);
    PadicScalar w = om.evaluate(PadicScalar::from_int(R, 3));
    CHECK(w.congruent(PadicScalar::from_int(R, -2), 8));
    CHECK(w.rel_prec() == 8);

    // laurent tail with a pole
    TruncSeries lgeo = geo.shifted(-1); // 1/(lambda(1-lambda))
    PadicScalar lw = lgeo.evaluate(a5);
    CHECK(lw.val_lower() == -1);
    CHECK(lw.congruent(PadicScalar::from_ratio(R, 1, 5) * PadicScalar::from_ratio(R, 1, -4), 6));
    CHECK_THROWS_AS((void)lgeo.evaluate(PadicScalar::zero(R)), EvaluationDomainError);

    // coefficients lift into an extension ring at evaluation time
    UnramifiedRing R2(ctx, 2);
    PadicScalar zeta(R2, R2.gen(), 8);
    PadicScalar alpha = zeta * PadicScalar::from_int(R2, 5);
    PadicScalar ev = geo.evaluate(alpha);
    PadicScalar expect = (PadicScalar::from_int(R2, 1) - alpha).inv();
    CHECK(ev.congruent(expect, 8));
}

TEST_CASE("series precision bookkeeping") {
    PrimeContext ctx(5, 2, 8);
    UnramifiedRing R(ctx, 1);
    TruncSeries f(R, 0, 6, false);
    f.set(0, PadicScalar::from_int(R, 7).cap_prec(3));
    f.set(1, PadicScalar::from_int(R, 2));
    TruncSeries g = geometric_series(R, 6);
    TruncSeries prod = f * g;
    // low-precision input coefficients dominate downstream precision
    CHECK(prod.coeff(0).rel_prec() <= 3);
    CHECK(prod.min_prec() <= 3);
    CHECK_FALSE(prod.zero_mod(8, 6));
    CHECK(prod.congruent(f * g, 3, 6));

    // certifying beyond the truncation order is refused
    CHECK_THROWS_AS((void)prod.zero_mod(3, 40), DomainError);
    CHECK_THROWS_AS((void)prod.coeff(17), DomainError);

    // window extension only for exact polynomials
    TruncSeries om = one_minus_lambda(R, 3);
    TruncSeries omx = om.truncated(10);
    CHECK(omx.L == 10);
    CHECK(omx.coeff(7).is_zero());
    CHECK_THROWS_AS((void)prod.truncated(10), DomainError);
}
