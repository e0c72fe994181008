#include "hg/hgfun.hpp"

#include <algorithm>
#include <vector>

#include "hg/errors.hpp"
#include "hg/kernels.hpp"

namespace hg {

TruncSeries hyp2f1_series(const UnramifiedRing& R, i64 A, i64 B, i64 C, i64 D, i32 L) {
    if (D <= 0 || L < 1) throw DomainError("bad hypergeometric window");
    TruncSeries f(R, 0, L, false);
    // run the Pochhammer product as unit * p^shift; folding the ratio steps
    // straight into one scalar parks digits under the modulus cap whenever a
    // step dips below valuation 0, and those digits never come back
    PadicScalar u = PadicScalar::from_int(R, 1);
    i32 shift = 0;
    f.set(0, u);
    for (i32 i = 0; i + 1 < L; ++i) {
        i64 num = (A + (i64)i * D) * (B + (i64)i * D);
        i64 den = (C + (i64)i * D) * (i64)(i + 1) * D;
        if (den == 0) throw DomainError("hypergeometric lower parameter pole");
        if (num == 0) break;  // terminating series, rest is exactly 0
        // strip p from the integers before touching the ring: a scalar holding
        // p^v * unit keeps only M - v digits of the unit, and that loss sticks
        while (num % R.ctx.p == 0) { num /= R.ctx.p; ++shift; }
        while (den % R.ctx.p == 0) { den /= R.ctx.p; --shift; }
        u = u * PadicScalar::from_ratio(R, num, den);
        f.set(i + 1, u.mul_ppow(shift));
    }
    return f;
}

HGSeries build_hg(const UnramifiedRing& R, i32 n, i32 L) {
    i64 N = R.ctx.N;
    i64 p = R.ctx.p;
    if (n < 1 || n >= N) throw DomainError("eigen index out of range");
    if (L < (i32)p) throw DomainError("window shorter than p");
    TruncSeries F = hyp2f1_series(R, n, N - n, N, N, L);
    for (i32 k = 0; k < L; ++k)
        if (F.coeff(k).val_lower() < 0)
            throw DomainError("hypergeometric coefficient escaped Z_p");
    TruncSeries T(R, 0, (i32)p, true);
    for (i32 k = 0; k < (i32)p; ++k) T.set(k, F.coeff(k));
    HGSeries out;
    out.n = n;
    out.series = F;
    out.truncated = T;
    return out;
}

PadicScalar hg_truncated_value(const UnramifiedRing& R, i32 n, const PadicScalar& alpha,
                               i64 K) {
    i64 N = R.ctx.N;
    if (n < 1 || n >= N) throw DomainError("eigen index out of range");
    if (K < 1) throw DomainError("empty truncation");
    const UnramifiedRing& S = *alpha.R;
    // same unit * p^shift split as hyp2f1_series; at K ~ p^6 the folded form
    // would have no digits left at all
    PadicScalar u = PadicScalar::from_int(S, 1);
    i32 shift = 0;
    PadicScalar ai = PadicScalar::from_int(S, 1);
    PadicScalar sum = PadicScalar::zero(S);
    for (i64 i = 0;; ++i) {
        sum = sum + (u * ai).mul_ppow(shift);
        if (i + 1 >= K) break;
        i64 num = (n + i * N) * ((i + 1) * N - n);
        i64 den = N * (i + 1);
        den *= den;
        while (num % S.ctx.p == 0) { num /= S.ctx.p; ++shift; }
        while (den % S.ctx.p == 0) { den /= S.ctx.p; --shift; }
        u = u * PadicScalar::from_ratio(S, num, den);
        ai = ai * alpha;
    }
    return sum;
}

namespace {

// (1 - x^p + (x-1)^p)/p as an exact integer polynomial of degree p-1
TruncSeries w_polynomial(const UnramifiedRing& R) {
    i64 p = R.ctx.p;
    std::vector<i64> c((size_t)p + 1, 0);
    c[0] += 1;
    c[(size_t)p] -= 1;
    i64 bin = 1;
    for (i64 k = 0; k <= p; ++k) {
        i64 sgn = ((p - k) % 2 == 0) ? 1 : -1;
        c[(size_t)k] += sgn * bin;
        if (k < p) bin = bin * (p - k) / (k + 1);
    }
    if (c[(size_t)p] != 0) throw MismatchError("x^p term failed to cancel");
    TruncSeries w(R, 0, (i32)p, true);
    for (i64 k = 0; k < p; ++k) {
        if (c[(size_t)k] % p != 0) throw MismatchError("w coefficients not divisible by p");
        w.set((i32)k, PadicScalar::from_int(R, c[(size_t)k] / p));
    }
    return w;
}

TruncSeries x_squared_minus_x(const UnramifiedRing& R) {
    TruncSeries xx(R, 0, 3, true);
    xx.set(1, PadicScalar::from_int(R, -1));
    xx.set(2, PadicScalar::from_int(R, 1));
    return xx;
}

void check_normalization(const TruncSeries& f, i32 slack) {
    const UnramifiedRing& R = *f.R;
    if (!f.coeff(0).is_zero()) throw MismatchError("nonzero polylog constant term");
    PadicScalar v1 = f.evaluate(PadicScalar::from_int(R, 1));
    // demand vanishing to the precision actually carried by the coefficients;
    // each integration pass pays v_p(k) digits at index k and cannot be asked
    // for more than it kept
    i32 need = std::min<i32>(R.ctx.M - slack, f.min_prec());
    if (need < 1) need = 1;
    if (!v1.is_zero() || v1.val_lower() < need)
        throw MismatchError("polylog fails to vanish at x=1");
}

} // namespace

PolylogFn build_polylog(const UnramifiedRing& R, i32 r) {
    if (r < 1 || r > 4) throw DomainError("polylog depth out of range");
    i64 p = R.ctx.p;
    i32 M = R.ctx.M;
    // last term of the w-series that can still matter mod p^(M+2)
    i32 n_max = 1;
    for (i32 n = 1; n <= M + 25; ++n) {
        i32 v = 0;
        i64 t = n;
        while (t % p == 0) {
            t /= p;
            ++v;
        }
        if (n - 1 - v < M + 2) n_max = n;
    }
    i32 D = std::max<i32>(n_max * (i32)(p - 1) + 1, 64);
    TruncSeries w = w_polynomial(R);
    TruncSeries acc(R, 0, 1, true);
    TruncSeries wn = TruncSeries::one(R, 1);
    for (i32 n = 1; n <= n_max; ++n) {
        wn = wn * w;
        PadicScalar scale = PadicScalar::from_ratio(R, 1, n).mul_ppow(n - 1);
        acc = acc - wn.scaled(scale);
    }
    TruncSeries cur = acc.truncated(D);
    check_normalization(cur, 2);
    TruncSeries xxi = x_squared_minus_x(R).truncated(D + 2).inverse();
    for (i32 k = 2; k <= r; ++k) {
        TruncSeries P = (cur * xxi).primitive(PadicScalar::zero(R));
        TruncSeries nxt(R, 0, D, true);
        for (i32 e = 0; e < D; ++e) nxt.set(e, P.coeff(e));
        check_normalization(nxt, 4);
        cur = nxt;
    }
    PolylogFn f;
    f.r = r;
    f.x_expansion = cur;
    f.claimed_prec = std::min<i32>(M, cur.min_prec());
    f.terms = D;
    return f;
}

TruncSeries polylog_nonpos(const UnramifiedRing& R, i32 r) {
    if (r > 0 || r < -4) throw DomainError("polylog depth out of range");
    i64 p = R.ctx.p;
    const i32 D = 72;
    TruncSeries w = w_polynomial(R);
    TruncSeries ompw =
        TruncSeries::one(R, (i32)p) - w.scaled(PadicScalar::from_int(R, p));
    TruncSeries inv = ompw.truncated(D + (i32)p).inverse();
    TruncSeries xp =
        TruncSeries::monomial(R, PadicScalar::from_int(R, 1), (i32)p, (i32)p + 1);
    TruncSeries cur = lambda_series(R, D) - (xp * inv).truncated(D);
    TruncSeries xx = x_squared_minus_x(R);
    for (i32 k = 0; k > r; --k) cur = xx * cur.derivative();
    return cur;
}

PadicScalar polylog_limit_oracle(i32 r, const PadicScalar& z, i32 s) {
    const UnramifiedRing& R = *z.R;
    i64 p = R.ctx.p;
    if (r < -4 || r > 4) throw DomainError("polylog depth out of range");
    if (!z.is_unit()) throw DomainError("oracle point must be a unit");
    PadicScalar one = PadicScalar::from_int(R, 1);
    if ((z - one).val_lower() >= 1)
        throw DomainError("oracle point congruent to 1 mod p");
    if (s < 1) throw DomainError("oracle depth must be positive");
    i64 ps = 1;
    for (i32 i = 0; i < s; ++i) {
        ps *= p;
        if (ps > 10000000) throw DomainError("oracle depth over budget");
    }
    UnramifiedRing::Elt raw = limit_oracle_sum(R, z.raw_elt(), r, ps);
    i32 zprec = z.val_lower() + z.rel_prec();
    PadicScalar S(R, raw, zprec);
    PadicScalar denom = one - z.pow(ps);
    return S / denom;
}

PadicScalar PolylogFn::eval_at_x(const PadicScalar& x) const {
    const UnramifiedRing* S = x.R;
    const UnramifiedRing* B = x_expansion.R;
    if (x.val_lower() < 0) throw DomainError("polylog argument off the closed unit disk");
    i32 T = std::min<i32>(terms, x_expansion.L);
    PadicScalar acc = PadicScalar::zero(*S);
    for (i32 k = T - 1; k >= 0; --k) {
        PadicScalar c = x_expansion.coeff(k);
        acc = acc * x + ((S == B) ? c : c.lift_to(*S));
    }
    return acc.cap_prec(claimed_prec);
}

PadicScalar PolylogFn::eval_at_z(const PadicScalar& z) const {
    const UnramifiedRing& S = *z.R;
    if (z.val_lower() < 0) throw DomainError("polylog point must be integral");
    PadicScalar om = PadicScalar::from_int(S, 1) - z;
    if (om.val_lower() >= 1) throw DomainError("polylog point in the residue disk of 1");
    return eval_at_x(om.inv());
}

PolylogFn build_polylog_calibrated(const UnramifiedRing& R, i32 r) {
    PolylogFn f = build_polylog(R, r);
    i64 p = R.ctx.p;
    i32 M = R.ctx.M;
    i32 s = 0;
    i64 ps = 1;
    while (ps * p <= 1000000) {
        ps *= p;
        ++s;
    }
    if (s < 2) throw CalibrationError("no oracle depth within budget");
    i32 D = f.x_expansion.L;
    i32 floor_all = std::min(M, f.claimed_prec);
    i32 needT = 1;
    for (i64 cpt = 2; cpt <= 4; ++cpt) {
        PadicScalar zc = teichmuller(R, cpt);
        PadicScalar t1 = polylog_limit_oracle(r, zc, s - 1);
        PadicScalar t2 = polylog_limit_oracle(r, zc, s);
        i32 noise = (t1 - t2).val_lower();
        PadicScalar x = (PadicScalar::from_int(R, 1) - zc).inv();
        std::vector<PadicScalar> partial;
        partial.reserve((size_t)D);
        PadicScalar acc = PadicScalar::zero(R);
        PadicScalar xk = PadicScalar::from_int(R, 1);
        for (i32 k = 0; k < D; ++k) {
            acc = acc + f.x_expansion.coeff(k) * xk;
            xk = xk * x;
            partial.push_back(acc);
        }
        PadicScalar full = partial.back();
        i32 agree = (full - t2).val_lower();
        i32 tol = std::min(agree, noise);
        if (tol < 3) throw CalibrationError("x-expansion and limit oracle diverge");
        i32 lastbad = 0;
        for (i32 k = 0; k < D; ++k)
            if ((partial[(size_t)k] - full).val_lower() < tol) lastbad = k + 1;
        needT = std::max(needT, lastbad + 1);
        floor_all = std::min(floor_all, agree);
    }
    f.terms = std::min<i32>(D, needT + needT / 2);
    f.claimed_prec = floor_all;
    f.calibrated = true;
    return f;
}

TruncSeries log_sigma_series(const TruncSeries& f, const SigmaLift& lift) {
    const UnramifiedRing& R = *f.R;
    i64 p = R.ctx.p;
    if (p != lift.p()) throw DomainError("lift prime mismatch");
    i32 M = R.ctx.M;
    i32 t = 0;
    while (t < f.count() && f.cs[(size_t)t].is_zero() && f.cs[(size_t)t].val_lower() >= M)
        ++t;
    if (t >= f.count()) throw DomainError("log of the zero series");
    i32 elo = f.lo + t;
    i32 Lu = f.L - elo;
    TruncSeries u(R, 0, Lu, false);
    for (i32 e = 0; e < Lu; ++e) u.set(e, f.coeff(e + elo));
    PadicScalar lead = u.coeff(0);
    if (lead.is_zero() || lead.val_lower() != 0)
        throw DomainError("leading coefficient is not a unit");

    TruncSeries up = TruncSeries::one(R, Lu);
    for (i64 i = 0; i < p; ++i) up = (up * u).truncated(Lu);
    TruncSeries us = sigma_substitute(u, lift, Lu);
    TruncSeries ratio = (up * us.inverse()).truncated(Lu);

    PadicScalar u0 = ratio.coeff(0);
    PadicScalar one = PadicScalar::from_int(R, 1);
    if ((u0 - one).val_lower() < 1)
        throw DomainError("frobenius congruence failed at the leading unit");
    TruncSeries v = ratio.scaled(u0.inv()) - TruncSeries::one(R, Lu);
    TruncSeries vs(R, 0, Lu, false);
    for (i32 e = 1; e < Lu; ++e) {
        PadicScalar ce = v.coeff(e);
        if (ce.val_lower() < 1) throw DomainError("frobenius congruence failed");
        vs.set(e, ce.mul_ppow(-1));
    }
    // p^{-1} log(1 + p*vs) with the p-powers applied exactly per term
    TruncSeries acc = TruncSeries::zero(R, Lu);
    TruncSeries vk = TruncSeries::one(R, Lu);
    for (i32 k = 1; k < Lu; ++k) {
        vk = (vk * vs).truncated(Lu);
        PadicScalar scale =
            PadicScalar::from_ratio(R, (k % 2 == 1) ? 1 : -1, k).mul_ppow(k - 1);
        acc = acc + vk.scaled(scale);
    }
    PadicScalar cpart = log_1unit(u0).mul_ppow(-1);
    if (elo != 0) {
        PadicScalar alift = (lift.a.R == &R) ? lift.a : lift.a.lift_to(R);
        cpart = cpart - PadicScalar::from_int(R, elo) * log_1unit(alift).mul_ppow(-1);
    }
    return acc + TruncSeries::monomial(R, cpart, 0, Lu, false);
}

} // namespace hg
