#include <doctest.h>

#include <random>

#include "hg/padic.hpp"

using namespace hg;

// constants frozen from tools/gen_expected.py
static const u64 TEICH_5_4_2 = 182;          // 2^(5^3) mod 5^4
static const u64 TEICH_7_12_2 = 9185715940u; // omega(2) mod 7^12
static const u64 TEICH_7_12_4 = 4655571260u; // omega(4) mod 7^12
static const u64 LOGU_5_6 = 1444;            // log_unit(6) mod 5^5, p=5

TEST_CASE("context validation") {
    CHECK_NOTHROW(PrimeContext(7, 3, 12));
    CHECK_NOTHROW(PrimeContext(5, 2, 12));
    CHECK_NOTHROW(PrimeContext(13, 4, 12));
    CHECK_THROWS_AS(PrimeContext(7, 4, 12), DomainError);  // 7 != 1 mod 4
    CHECK_THROWS_AS(PrimeContext(8, 7, 12), DomainError);  // not prime
    CHECK_THROWS_AS(PrimeContext(7, 3, 0), DomainError);   // M < 1
    CHECK_THROWS_AS(PrimeContext(7, 1, 2), DomainError);   // N < 2
    CHECK_THROWS_AS(PrimeContext(13, 4, 20), DomainError); // 13^20 overflows
}

TEST_CASE("ring construction and frobenius") {
    std::mt19937_64 rng(7);
    for (i64 p : {5, 7, 13}) {
        PrimeContext ctx(p, 2, 8);
        for (i32 d = 1; d <= 4; ++d) {
            UnramifiedRing R(ctx, d);
            auto z = R.gen();
            CHECK(R.eq(R.pow(z, R.q1()), R.one()));
            // sigma is a ring hom and sigma(zeta) = zeta^p
            CHECK(R.eq(R.sigma(z), R.pow(z, (u64)p)));
            for (int t = 0; t < 20; ++t) {
                UnramifiedRing::Elt a{}, b{};
                for (i32 i = 0; i < d; ++i) {
                    a[i] = rng() % R.pM;
                    b[i] = rng() % R.pM;
                }
                CHECK(R.eq(R.sigma(R.add(a, b)), R.add(R.sigma(a), R.sigma(b))));
                CHECK(R.eq(R.sigma(R.mul(a, b)), R.mul(R.sigma(a), R.sigma(b))));
                CHECK(R.eq(R.sigma(a, d), a)); // sigma^d = id
                // sigma fixes the prime subring
                UnramifiedRing::Elt s{};
                s[0] = a[0];
                CHECK(R.eq(R.sigma(s), s));
            }
            // random unit inverses
            for (int t = 0; t < 20; ++t) {
                UnramifiedRing::Elt a{};
                for (i32 i = 0; i < d; ++i) a[i] = rng() % R.pM;
                if (R.val(a) != 0) a[0] |= 1;
                if (R.val(a) != 0) continue;
                CHECK(R.eq(R.mul(a, R.inv(a)), R.one()));
            }
        }
    }
}

TEST_CASE("teichmuller lifts") {
    PrimeContext c54(5, 2, 4);
    UnramifiedRing R54(c54, 1);
    auto t = teichmuller(R54, 2);
    CHECK(t.c[0] == TEICH_5_4_2);
    CHECK(t.prec == 4);

    PrimeContext c7(7, 3, 12);
    UnramifiedRing R7(c7, 1);
    CHECK(teichmuller(R7, 1).c[0] == 1);
    CHECK(teichmuller(R7, -1).c[0] == R7.pM - 1);
    CHECK(teichmuller(R7, 2).c[0] == TEICH_7_12_2);
    // omega(2) * omega(4) = omega(8) = omega(1) = 1
    auto w2 = teichmuller(R7, 2), w4 = teichmuller(R7, 4);
    CHECK((w2 * w4).congruent(PadicScalar::from_int(R7, 1), 12));
    CHECK_THROWS_AS(teichmuller(R7, 0), DomainError);
    CHECK_THROWS_AS(teichmuller(R7, 7), DomainError);

    // extension ring: lift of a degree-2 residue, sigma acts as p-power
    PrimeContext c5(5, 2, 8);
    UnramifiedRing R52(c5, 2);
    UnramifiedRing::Elt r{};
    r[0] = 2;
    r[1] = 3;
    auto w = teichmuller(R52, r);
    CHECK(w.pow((i64)R52.q1()).congruent(PadicScalar::from_int(R52, 1), 8));
    CHECK(w.sigma().congruent(w.pow(5), 8));
}

TEST_CASE("roots of unity") {
    auto r3 = roots_of_unity(7, 12, 3);
    REQUIRE(r3.ring->d == 1);
    REQUIRE(r3.roots.size() == 3);
    CHECK(r3.roots[0].c[0] == 1);
    // {1, omega(2), omega(4)} as a set
    bool has2 = false, has4 = false;
    for (auto& r : r3.roots) {
        if (r.c[0] == TEICH_7_12_2) has2 = true;
        if (r.c[0] == TEICH_7_12_4) has4 = true;
    }
    CHECK(has2);
    CHECK(has4);

    auto r6 = roots_of_unity(7, 10, 6);
    CHECK(r6.ring->d == 1);
    CHECK(r6.roots.size() == 6);
    bool has_m1 = false;
    for (auto& r : r6.roots) has_m1 |= (r.c[0] == r6.ring->pM - 1);
    CHECK(has_m1);

    // 8th roots need the quadratic extension of Z_5
    auto r8 = roots_of_unity(5, 8, 8);
    CHECK(r8.ring->d == 2);
    CHECK(r8.roots.size() == 8);
    auto one = PadicScalar::from_int(*r8.ring, 1);
    for (auto& r : r8.roots) {
        CHECK(r.pow(8).congruent(one, 8));
        // closed under inversion
        auto ri = r.inv();
        bool found = false;
        for (auto& s : r8.roots) found |= s.congruent(ri, 8);
        CHECK(found);
    }
    for (size_t i = 0; i < 8; ++i)
        for (size_t j = i + 1; j < 8; ++j) CHECK(!r8.roots[i].congruent(r8.roots[j], 1));

    CHECK_THROWS_AS(roots_of_unity(5, 8, 7), UnsupportedExtension);
}

TEST_CASE("log_unit basics and frozen value") {
    PrimeContext ctx(5, 2, 6);
    UnramifiedRing R(ctx, 1);
    auto one = PadicScalar::from_int(R, 1);
    CHECK(log_unit(one).is_zero());
    auto w = teichmuller(R, 2);
    auto lw = log_unit(w);
    CHECK(lw.is_zero());
    CHECK(lw.prec >= 5);

    auto six = PadicScalar::from_int(R, 6);
    auto l6 = log_unit(six);
    CHECK(l6.prec == 5);
    CHECK(l6.neg == 0);
    CHECK(l6.c[0] == LOGU_5_6);

    CHECK_THROWS_AS(log_unit(PadicScalar::from_int(R, 5)), DomainError);
}

TEST_CASE("log_unit additivity on random units") {
    std::mt19937_64 rng(11);
    for (i64 p : {5, 7}) {
        PrimeContext ctx(p, 2, 10);
        for (i32 d : {1, 2}) {
            UnramifiedRing R(ctx, d);
            for (int t = 0; t < 50; ++t) {
                UnramifiedRing::Elt a{}, b{};
                for (i32 i = 0; i < d; ++i) {
                    a[i] = rng() % R.pM;
                    b[i] = rng() % R.pM;
                }
                if (R.val(a) != 0) a[0] = 1 + a[0] % ((u64)p - 1);
                if (R.val(b) != 0) b[0] = 1 + b[0] % ((u64)p - 1);
                PadicScalar x(R, a, 10), y(R, b, 10);
                auto lhs = log_unit(x * y);
                auto rhs = log_unit(x) + log_unit(y);
                CHECK(lhs.congruent(rhs, 9));
            }
        }
    }
}

TEST_CASE("log_unit at higher sigma powers") {
    // log_unit(alpha, j) = p^(-j) log(alpha^(p^j)/sigma^j alpha);
    // on Q_p it equals (1 - 1/p^j)/(1 - 1/p) * log_unit(alpha, 1) * ... no such
    // shortcut is assumed; instead check j-additivity through the tower:
    // for alpha in Z_p, sigma = id, so log_unit(alpha, j) = (p^j - 1)/p^j log alpha.
    PrimeContext ctx(5, 2, 10);
    UnramifiedRing R(ctx, 1);
    auto a = PadicScalar::from_int(R, 6);
    auto l1 = log_unit(a, 1);
    auto l2 = log_unit(a, 2);
    // (p^2-1)/p^2 log = (p+1)/p * (p-1)/p log
    auto expect = l1 * PadicScalar::from_ratio(R, 6, 5);
    CHECK(l2.congruent(expect, 7));
}

TEST_CASE("exp and log round trip") {
    PrimeContext ctx(7, 3, 10);
    UnramifiedRing R(ctx, 1);
    auto x = PadicScalar::from_int(R, 7 * 3);
    auto e = exp_small(x);
    CHECK(e.is_unit());
    // log(exp(x)) via the 1-unit series
    auto l = log_1unit(e);
    CHECK(l.congruent(x, 9));
}

TEST_CASE("scalar precision rules") {
    PrimeContext ctx(5, 2, 8);
    UnramifiedRing R(ctx, 1);
    auto u = PadicScalar::from_int(R, 3);
    auto pu = PadicScalar::from_int(R, 5 * 3);
    CHECK(u.prec == 8);
    CHECK(pu.val_exact() == 1);
    // division by p*unit: one digit for the valuation, one more because the
    // divisor's unit part is itself only known to relative precision 7
    auto q = u / pu;
    CHECK(q.prec == 6);
    CHECK(q.neg == 1);
    CHECK(q.val_exact() == -1);
    // exact p-power scaling costs only the valuation digit
    CHECK(u.mul_ppow(-1).prec == 7);
    // multiplying back restores integrality and precision cap
    auto r = q * pu;
    CHECK(r.congruent(u, 7));
    CHECK(r.neg == 0);

    // min-rule for add
    auto low = u.cap_prec(3);
    CHECK((low + pu).prec == 3);
    CHECK((low * pu).prec == 4); // val 0 + val 1 + min rel 3

    // from_ratio with p in the denominator
    auto fr = PadicScalar::from_ratio(R, 2, 75); // 2/(3 * 25)
    CHECK(fr.val_exact() == -2);
    CHECK(fr.prec == 6);
    CHECK((fr * PadicScalar::from_int(R, 75)).congruent(PadicScalar::from_int(R, 2), 6));

    // zero handling
    auto z = PadicScalar::zero(R);
    CHECK(z.is_zero());
    CHECK(z.val_lower() == 8);
    CHECK_THROWS_AS(z.val_exact(), NotInvertible);
    CHECK_THROWS_AS(z.inv(), NotInvertible);
    CHECK((z * u).is_zero());
    CHECK((z + u).congruent(u, 8));
}

TEST_CASE("precision soundness: recompute at M+4") {
    // the same computation at capacity M and M+4 must agree on the first M digits
    auto run = [](i32 M) {
        PrimeContext ctx(7, 3, M);
        UnramifiedRing R(ctx, 1);
        auto a = PadicScalar::from_int(R, 2);
        auto b = PadicScalar::from_ratio(R, 3, 7); // valuation -1
        auto t = teichmuller(R, 3);
        auto x = (a + b) * t - b.pow(2) / a;
        auto l = log_unit(a * a + PadicScalar::from_int(R, 1));
        return std::make_pair(x, l);
    };
    auto [x1, l1] = run(8);
    auto [x2, l2] = run(12);
    // compare digit strings at the lower precision
    CHECK(x1.prec <= x2.prec);
    CHECK(l1.prec <= l2.prec);
    u64 p7 = 1;
    for (int i = 0; i < x1.prec + x1.neg; ++i) p7 *= 7;
    CHECK(x2.neg == x1.neg);
    CHECK(x2.c[0] % p7 == x1.c[0]);
    u64 pl = 1;
    for (int i = 0; i < l1.prec; ++i) pl *= 7;
    CHECK(l2.c[0] % pl == l1.c[0]);
}

TEST_CASE("lift and retract between rings") {
    PrimeContext ctx(5, 2, 8);
    UnramifiedRing R1(ctx, 1);
    UnramifiedRing R2(ctx, 2);
    auto a = PadicScalar::from_ratio(R1, 7, 5);
    auto b = a.lift_to(R2);
    CHECK(b.neg == 1);
    CHECK(b.c[0] == a.c[0]);
    auto back = b.retract_to_prime(R1);
    CHECK(back.congruent(a, 7));
    auto z = PadicScalar(R2, R2.gen(), 8);
    CHECK_THROWS_AS(z.retract_to_prime(R1), DomainError);
}
