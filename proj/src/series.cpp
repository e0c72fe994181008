#include "hg/series.hpp"

#include <algorithm>
#include <cassert>

#include "hg/errors.hpp"

namespace hg {

namespace {
constexpr i64 kInfL = i64(1) << 28;
}

SigmaLift::SigmaLift(const PadicScalar& a_) : a(a_) {
    if (a.R->d != 1) throw DomainError("sigma lift scale must live in Z_p");
    if (!a.is_unit()) throw DomainError("sigma lift scale must be a unit");
    PadicScalar one = PadicScalar::from_int(*a.R, 1);
    if (!(a - one).is_zero() && (a - one).val_lower() < 1)
        throw DomainError("sigma lift scale must be 1 mod p");
}

TruncSeries::TruncSeries(const UnramifiedRing& ring, i32 lo_, i32 L_, bool poly_)
    : R(&ring), lo(lo_), L(L_), poly(poly_) {
    if (L < lo) throw DomainError("series window is empty in the wrong direction");
    cs.assign((size_t)(L - lo), PadicScalar::zero(ring));
}

TruncSeries TruncSeries::zero(const UnramifiedRing& ring, i32 L) {
    return TruncSeries(ring, 0, L, false);
}

TruncSeries TruncSeries::one(const UnramifiedRing& ring, i32 L) {
    TruncSeries r(ring, 0, L, true);
    r.set(0, PadicScalar::from_int(ring, 1));
    return r;
}

TruncSeries TruncSeries::monomial(const UnramifiedRing& ring, const PadicScalar& c, i32 k, i32 L,
                                  bool poly_) {
    if (L <= k) throw DomainError("monomial exponent beyond truncation");
    TruncSeries r(ring, k, L, poly_);
    r.set(k, c);
    return r;
}

PadicScalar TruncSeries::coeff(i32 exp) const {
    if (exp < lo) return PadicScalar::zero(*R);
    if (exp >= L) {
        if (poly) return PadicScalar::zero(*R);
        throw DomainError("coefficient beyond truncation order");
    }
    return cs[(size_t)(exp - lo)];
}

void TruncSeries::set(i32 exp, const PadicScalar& v) {
    if (exp < lo || exp >= L) throw DomainError("set outside series window");
    if (v.R != R) throw DomainError("coefficient from a different ring");
    cs[(size_t)(exp - lo)] = v;
}

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
    assert(R == o.R);
    i32 nlo = std::min(lo, o.lo);
    bool np = poly && o.poly;
    i32 nL;
    if (np) nL = std::max(L, o.L);
    else if (poly) nL = o.L;
    else if (o.poly) nL = L;
    else nL = std::min(L, o.L);
    if (nL < nlo) nL = nlo;
    TruncSeries r(*R, nlo, nL, np);
    for (i32 e = nlo; e < nL; ++e) r.set(e, coeff(e) + o.coeff(e));
    return r;
}

TruncSeries TruncSeries::operator-() const {
    TruncSeries r(*R, lo, L, poly);
    for (i32 i = 0; i < count(); ++i) r.cs[(size_t)i] = -cs[(size_t)i];
    return r;
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const { return *this + (-o); }

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
    assert(R == o.R);
    i64 Lf = poly ? kInfL : L;
    i64 Lg = o.poly ? kInfL : o.L;
    bool np = poly && o.poly;
    i64 nlo = (i64)lo + o.lo;
    i64 nL = np ? ((i64)L + o.L - 1) : std::min(Lf + o.lo, Lg + lo);
    if (nL < nlo) nL = nlo;
    TruncSeries r(*R, (i32)nlo, (i32)nL, np);
    for (i32 i = 0; i < count(); ++i) {
        if (cs[(size_t)i].is_zero() && cs[(size_t)i].val_lower() >= R->ctx.M) continue;
        for (i32 j = 0; j < o.count(); ++j) {
            i64 e = (i64)(lo + i) + (o.lo + j);
            if (e >= nL) break;
            r.cs[(size_t)(e - nlo)] =
                r.cs[(size_t)(e - nlo)] + cs[(size_t)i] * o.cs[(size_t)j];
        }
    }
    return r;
}

TruncSeries TruncSeries::scaled(const PadicScalar& s) const {
    PadicScalar sv = (s.R == R) ? s : s.lift_to(*R);
    TruncSeries r(*R, lo, L, poly);
    for (i32 i = 0; i < count(); ++i) r.cs[(size_t)i] = cs[(size_t)i] * sv;
    return r;
}

TruncSeries TruncSeries::shifted(i32 k) const {
    TruncSeries r(*R, lo + k, L + k, poly);
    r.cs = cs;
    return r;
}

TruncSeries TruncSeries::inverse() const {
    // skip a leading run that is zero at full working precision
    i32 t = 0;
    while (t < count() && cs[(size_t)t].is_zero() && cs[(size_t)t].val_lower() >= R->ctx.M) ++t;
    i32 elo = lo + t;
    i32 n = L - elo;
    if (t >= count() || n <= 0) throw NotInvertible("series has no visible leading term");
    const PadicScalar& a0 = cs[(size_t)t];
    if (a0.is_zero() || a0.val_lower() != 0)
        throw NotInvertible("leading series coefficient is not a unit");
    PadicScalar a0i = a0.inv();
    std::vector<PadicScalar> b;
    b.reserve((size_t)n);
    b.push_back(a0i);
    for (i32 k = 1; k < n; ++k) {
        PadicScalar s = PadicScalar::zero(*R);
        for (i32 i = 1; i <= k; ++i) s = s + coeff(elo + i) * b[(size_t)(k - i)];
        b.push_back(-(a0i * s));
    }
    TruncSeries r(*R, -elo, -elo + n, false);
    for (i32 k = 0; k < n; ++k) r.set(-elo + k, b[(size_t)k]);
    return r;
}

TruncSeries TruncSeries::truncated(i32 newL) const {
    if (newL < lo) newL = lo;
    if (newL > L && !poly) throw DomainError("cannot extend a truncated series");
    bool np = poly && newL >= L;
    TruncSeries r(*R, lo, newL, np);
    for (i32 e = lo; e < std::min(newL, L); ++e) r.set(e, cs[(size_t)(e - lo)]);
    return r;
}

TruncSeries TruncSeries::derivative() const {
    i32 nlo = (lo == 0) ? 0 : lo - 1;
    if (L - 1 < nlo) return TruncSeries(*R, nlo, nlo, poly);
    TruncSeries r(*R, nlo, L - 1, poly);
    for (i32 k = std::max(lo, nlo + 1); k < L; ++k)
        r.set(k - 1, coeff(k) * PadicScalar::from_int(*R, k));
    return r;
}

TruncSeries TruncSeries::primitive(const PadicScalar& c0) const {
    if (lo <= -1 && -1 < L) {
        PadicScalar res = coeff(-1);
        if (!res.is_zero()) throw NotIntegrable("nonzero residue at lambda^-1");
    }
    i32 nlo = (lo >= 0) ? 0 : lo + 1;
    TruncSeries r(*R, nlo, L + 1, poly);
    PadicScalar c0v = (c0.R == R) ? c0 : c0.lift_to(*R);
    r.set(0, c0v);
    for (i32 k = lo; k < L; ++k) {
        if (k == -1) continue;
        // divide by the exact rational so only v_p(k+1) digits are lost
        r.set(k + 1, coeff(k) * PadicScalar::from_ratio(*R, 1, k + 1));
    }
    return r;
}

PadicScalar TruncSeries::evaluate(const PadicScalar& alpha) const {
    const UnramifiedRing* S = alpha.R;
    auto liftc = [&](i32 e) {
        PadicScalar c = coeff(e);
        return (S == R) ? c : c.lift_to(*S);
    };
    bool small = alpha.val_lower() >= 1;
    if (!small && !poly) throw EvaluationDomainError("evaluation point outside certified domain");

    PadicScalar sum = PadicScalar::zero(*S);
    i32 top = L - 1;
    i32 bot = std::max(lo, 0);
    if (top >= bot) {
        PadicScalar acc = liftc(top);
        for (i32 k = top - 1; k >= bot; --k) acc = acc * alpha + liftc(k);
        if (bot > 0) acc = acc * alpha.pow(bot);
        sum = sum + acc;
    }
    if (lo < 0) {
        bool have_neg = false;
        for (i32 k = lo; k <= std::min(-1, L - 1); ++k)
            if (!coeff(k).is_zero()) have_neg = true;
        if (have_neg && alpha.is_zero())
            throw EvaluationDomainError("pole at the origin");
        if (have_neg) {
            PadicScalar beta = alpha.inv();
            i32 kt = std::min(-1, L - 1);
            PadicScalar acc = liftc(lo);
            for (i32 k = lo + 1; k <= kt; ++k) acc = acc * beta + liftc(k);
            acc = acc * beta.pow(-kt);
            sum = sum + acc;
        }
    }
    if (!poly) {
        // unknown tail: assume its coefficient valuations stay at or above the
        // worst valuation seen in the stored window (floored at 0)
        i64 B = std::min<i64>(0, min_val_lower(lo, L));
        i64 tail = (i64)L * std::max<i64>(1, alpha.val_lower()) + B;
        i64 capv = std::min<i64>(tail, R->ctx.M);
        sum = sum.cap_prec((i32)std::max<i64>(capv, 0));
    }
    return sum;
}

i32 TruncSeries::min_val_lower(i32 from_exp, i32 upto_exp) const {
    i32 mv = INT32_MAX / 2;
    for (i32 e = std::max(from_exp, lo); e < std::min(upto_exp, L); ++e)
        mv = std::min(mv, cs[(size_t)(e - lo)].val_lower());
    return mv;
}

i32 TruncSeries::min_prec() const {
    i32 mp = INT32_MAX / 2;
    for (i32 i = 0; i < count(); ++i) mp = std::min(mp, cs[(size_t)i].val_lower() + cs[(size_t)i].rel_prec());
    return mp;
}

bool TruncSeries::zero_mod(i32 m, i32 upto_exp) const {
    if (upto_exp > L && !poly) throw DomainError("cannot certify beyond truncation order");
    return min_val_lower(lo, std::min(upto_exp, L)) >= m;
}

bool TruncSeries::congruent(const TruncSeries& o, i32 m, i32 upto_exp) const {
    return (*this - o).zero_mod(m, upto_exp);
}

TruncSeries sigma_substitute(const TruncSeries& f, const SigmaLift& lift, i32 Lcap) {
    const UnramifiedRing& R = *f.R;
    i64 p = lift.p();
    if (p != R.ctx.p) throw DomainError("sigma lift prime does not match the ring");
    PadicScalar a = (lift.a.R == f.R) ? lift.a : lift.a.lift_to(R);
    i64 nlo = p * f.lo;
    i64 nLfull = p * f.L;
    i64 nL = (Lcap >= 0) ? std::min<i64>(Lcap, nLfull) : nLfull;
    if (nL < nlo) nL = nlo;
    bool np = f.poly && nL == nLfull;
    TruncSeries r(R, (i32)nlo, (i32)nL, np);
    for (i32 k = f.lo; k < f.L; ++k) {
        i64 e = p * (i64)k;
        if (e < nlo || e >= nL) continue;
        PadicScalar c = f.coeff(k);
        if (c.is_zero() && c.val_lower() >= R.ctx.M) continue;
        r.set((i32)e, c.sigma(1) * a.pow(k));
    }
    return r;
}

TruncSeries geometric_series(const UnramifiedRing& ring, i32 L) {
    TruncSeries r(ring, 0, L, false);
    for (i32 k = 0; k < L; ++k) r.set(k, PadicScalar::from_int(ring, 1));
    return r;
}

TruncSeries one_minus_lambda(const UnramifiedRing& ring, i32 L) {
    if (L < 2) throw DomainError("window too short");
    TruncSeries r(ring, 0, L, true);
    r.set(0, PadicScalar::from_int(ring, 1));
    r.set(1, PadicScalar::from_int(ring, -1));
    return r;
}

TruncSeries lambda_series(const UnramifiedRing& ring, i32 L) {
    if (L < 2) throw DomainError("window too short");
    TruncSeries r(ring, 0, L, true);
    r.set(1, PadicScalar::from_int(ring, 1));
    return r;
}

} // namespace hg
