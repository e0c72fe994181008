#include "hg/fiber.hpp"

#include <algorithm>
#include <utility>

namespace hg {

namespace {

using V = std::vector<u64>;
using Pair = std::array<u64, 2>;
using PV = std::vector<Pair>;

void trimv(V& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
}
void trimq(PV& v) {
    while (!v.empty() && v.back()[0] == 0 && v.back()[1] == 0) v.pop_back();
}

void add_at(const FiberContext& C, V& acc, size_t idx, u64 v) {
    if (!v) return;
    if (acc.size() <= idx) acc.resize(idx + 1, 0);
    acc[idx] = C.add(acc[idx], v);
}

void addv(const FiberContext& C, V& acc, const V& x, u64 s = 1, size_t at = 0) {
    if (x.empty() || s == 0) return;
    if (acc.size() < x.size() + at) acc.resize(x.size() + at, 0);
    for (size_t i = 0; i < x.size(); ++i)
        if (x[i]) acc[i + at] = C.add(acc[i + at], C.mul(s, x[i]));
}

void addq_at(const FiberContext& C, PV& acc, size_t idx, u64 c0, u64 c1) {
    if (!c0 && !c1) return;
    if (acc.size() <= idx) acc.resize(idx + 1, Pair{0, 0});
    acc[idx][0] = C.add(acc[idx][0], c0);
    acc[idx][1] = C.add(acc[idx][1], c1);
}

V conv(const FiberContext& C, const V& a, const V& b) {
    if (a.empty() || b.empty()) return {};
    V out(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            if (b[j]) out[i + j] = C.add(out[i + j], C.mul(a[i], b[j]));
    }
    return out;
}

V vpow(const FiberContext& C, V base, i64 e) {
    V r{1};
    while (e) {
        if (e & 1) r = conv(C, r, base);
        if (e >>= 1) base = conv(C, base, base);
    }
    return r;
}

// q = 1 - 2x + alpha x^2 as a dense polynomial
V qdense(const FiberContext& C) { return V{1, C.sub(0, C.from_i64(2)), C.alpha}; }

V family_base(const FiberContext& C, i32 family) {
    if (family == 0) return V{0, 1};
    if (family == 1) return V{1, C.neg(1)};
    return V{1, C.neg(C.alpha)};
}

// splits scale * num(x) / q^K into q-block digits plus a polynomial part,
// using x^2 = (q - 1 + 2x)/alpha to push overflow toward lower q-levels
void num_over_q(const FiberContext& C, V num, i32 K, PV& outq, V& outpoly, u64 scale = 1) {
    u64 ai = C.inv_unit(C.alpha);
    for (i32 lvl = K; lvl >= 1; --lvl) {
        V promoted;
        trimv(num);
        while (num.size() >= 3) {
            size_t d = num.size() - 1;
            u64 c = C.mul(num[d], ai);
            num.pop_back();
            if (c) {
                add_at(C, promoted, d - 2, c);
                num[d - 1] = C.add(num[d - 1], C.add(c, c));
                num[d - 2] = C.sub(num[d - 2], c);
            }
        }
        u64 c0 = num.size() > 0 ? num[0] : 0, c1 = num.size() > 1 ? num[1] : 0;
        addq_at(C, outq, (size_t)lvl - 1, C.mul(scale, c0), C.mul(scale, c1));
        num = std::move(promoted);
    }
    addv(C, outpoly, num, scale);
}

V series_inv(const FiberContext& C, const V& c, size_t len) {
    V out(len, 0);
    u64 c0i = C.inv_unit(c.empty() ? 0 : c[0]);
    out[0] = c0i;
    for (size_t s = 1; s < len; ++s) {
        u64 acc = 0;
        size_t jmax = std::min(s, c.size() ? c.size() - 1 : 0);
        for (size_t j = 1; j <= jmax; ++j)
            if (c[j]) acc = C.add(acc, C.mul(c[j], out[s - j]));
        out[s] = C.mul(C.neg(acc), c0i);
    }
    return out;
}

// remainder of a by f (leading coefficient of f must be a unit)
V polyrem(const FiberContext& C, V a, const V& f) {
    u64 li = C.inv_unit(f.back());
    size_t df = f.size() - 1;
    trimv(a);
    while (a.size() > df) {
        size_t d = a.size() - 1;
        u64 c = C.mul(a[d], li);
        if (c)
            for (size_t j = 0; j < df; ++j)
                a[d - df + j] = C.sub(a[d - df + j], C.mul(c, f[j]));
        a.pop_back();
        trimv(a);
    }
    return a;
}

V mulrem(const FiberContext& C, const V& a, const V& b, const V& f) {
    return polyrem(C, conv(C, a, b), f);
}

// inverse of base modulo q^k; base must be a unit on both q-disks
V inv_mod_qk(const FiberContext& C, const V& base, i32 k, const V& qk) {
    V bq = polyrem(C, base, qdense(C));
    u64 a0 = bq.size() > 0 ? bq[0] : 0, a1 = bq.size() > 1 ? bq[1] : 0;
    u64 ai = C.inv_unit(C.alpha);
    u64 t = C.mul(a1, ai);
    // (a0 + a1 x)(b0 + b1 x) = 1 given x^2 = (2x - 1)/alpha
    u64 m00 = a0, m01 = C.neg(t);
    u64 m10 = a1, m11 = C.add(a0, C.add(t, t));
    u64 det = C.sub(C.mul(m00, m11), C.mul(m01, m10));
    u64 di = C.inv_unit(det);
    V B{C.mul(di, m11), C.neg(C.mul(di, m10))};
    V bmod = polyrem(C, base, qk);
    i32 e = 1;
    while (e < k) {
        e = std::min(2 * e, k);
        V qe = (e == k) ? qk : vpow(C, qdense(C), e);
        V prod = mulrem(C, bmod, B, qe);
        V corr(std::max<size_t>(prod.size(), 1), 0);
        for (size_t i = 0; i < prod.size(); ++i) corr[i] = C.neg(prod[i]);
        corr[0] = C.add(corr[0], C.from_i64(2));
        B = mulrem(C, B, corr, qe);
    }
    return B;
}

// value of sum vec[j-1] base^-j as a residue mod q^K, computed as
// (sum vec[j-1] base^(M-j)) base^-M to keep the work quasi-linear in M
V pole_mod_qk(FiberContext& C, const V& vec, i32 family, i32 K, const V& qk) {
    if (vec.empty()) return {};
    V bi = C.q_base_inv(family, K);
    V base = family_base(C, family);
    size_t M = vec.size();
    V num, bp{1};
    for (size_t i = 0; i < M; ++i) {
        addv(C, num, bp, vec[M - 1 - i]);
        bp = conv(C, bp, base);
    }
    num = polyrem(C, num, qk);
    V bim{1}, sq = bi;
    size_t e = M;
    while (e) {
        if (e & 1) bim = mulrem(C, bim, sq, qk);
        if (e >>= 1) sq = mulrem(C, sq, sq, qk);
    }
    return mulrem(C, num, bim, qk);
}

// numerator of the whole q-block over q^size
V pq_lift(const FiberContext& C, const PV& pq) {
    V out;
    V q = qdense(C);
    for (size_t kk = 1; kk <= pq.size(); ++kk) {
        if (!out.empty()) out = conv(C, out, q);
        add_at(C, out, 0, pq[kk - 1][0]);
        add_at(C, out, 1, pq[kk - 1][1]);
        trimv(out);
    }
    return out;
}

// ---- Taylor expansions of one pole family around another family's center ----

// around x = 0
V taylor0_p1(FiberContext& C, const V& p1, size_t len) {
    V out(len, 0);
    for (size_t k = 1; k <= p1.size(); ++k) {
        if (!p1[k - 1]) continue;
        for (size_t s = 0; s < len; ++s)
            out[s] = C.add(out[s], C.mul(p1[k - 1], C.binom((i32)(k - 1 + s), (i32)s)));
    }
    return out;
}
V taylor0_pa(FiberContext& C, const V& pa, size_t len) {
    V out(len, 0);
    for (size_t k = 1; k <= pa.size(); ++k) {
        if (!pa[k - 1]) continue;
        u64 apow = 1;
        for (size_t s = 0; s < len; ++s) {
            out[s] = C.add(out[s], C.mul(C.mul(pa[k - 1], apow), C.binom((i32)(k - 1 + s), (i32)s)));
            apow = C.mul(apow, C.alpha);
        }
    }
    return out;
}
V taylor0_pq(const FiberContext& C, const PV& pq, size_t len) {
    if (!len) return {};
    V qi = series_inv(C, qdense(C), len);
    V out(len, 0), acc{1};
    for (size_t k = 1; k <= pq.size(); ++k) {
        V nacc = conv(C, acc, qi);
        nacc.resize(std::min(nacc.size(), len));
        acc = nacc;
        u64 c = pq[k - 1][0], e = pq[k - 1][1];
        if (!c && !e) continue;
        for (size_t s = 0; s < acc.size(); ++s) {
            if (!acc[s]) continue;
            if (c) out[s] = C.add(out[s], C.mul(c, acc[s]));
            if (e && s + 1 < len) out[s + 1] = C.add(out[s + 1], C.mul(e, acc[s]));
        }
    }
    return out;
}

// around x = 1, in powers of t = 1 - x
V taylor1_p0(FiberContext& C, const V& p0, size_t len) {
    V out(len, 0);
    for (size_t k = 1; k <= p0.size(); ++k) {
        if (!p0[k - 1]) continue;
        for (size_t s = 0; s < len; ++s)
            out[s] = C.add(out[s], C.mul(p0[k - 1], C.binom((i32)(k - 1 + s), (i32)s)));
    }
    return out;
}
V taylor1_pa(FiberContext& C, const V& pa, size_t len) {
    u64 oma = C.sub(1, C.alpha);
    u64 omai = C.inv_unit(oma);
    u64 ratio = C.neg(C.mul(C.alpha, omai));
    V out(len, 0);
    for (size_t k = 1; k <= pa.size(); ++k) {
        if (!pa[k - 1]) continue;
        u64 pref = 1;
        for (size_t i = 0; i < k; ++i) pref = C.mul(pref, omai);
        u64 rs = 1;
        for (size_t s = 0; s < len; ++s) {
            out[s] = C.add(out[s], C.mul(C.mul(pa[k - 1], C.mul(pref, rs)),
                                         C.binom((i32)(k - 1 + s), (i32)s)));
            rs = C.mul(rs, ratio);
        }
    }
    return out;
}
V taylor1_pq(const FiberContext& C, const PV& pq, size_t len) {
    if (!len) return {};
    u64 am1 = C.sub(C.alpha, 1);
    V qt{am1, C.neg(C.add(am1, am1)), C.alpha};  // q at x = 1 - t
    V qi = series_inv(C, qt, len);
    V out(len, 0), acc{1};
    for (size_t k = 1; k <= pq.size(); ++k) {
        V nacc = conv(C, acc, qi);
        nacc.resize(std::min(nacc.size(), len));
        acc = nacc;
        u64 c = pq[k - 1][0], e = pq[k - 1][1];
        if (!c && !e) continue;
        u64 c0 = C.add(c, e), c1 = C.neg(e);  // c + e x = (c+e) - e t
        for (size_t s = 0; s < acc.size(); ++s) {
            if (!acc[s]) continue;
            if (c0) out[s] = C.add(out[s], C.mul(c0, acc[s]));
            if (c1 && s + 1 < len) out[s + 1] = C.add(out[s + 1], C.mul(c1, acc[s]));
        }
    }
    return out;
}

// around x = 1/alpha, in powers of s = 1 - alpha x
V taylora_p0(FiberContext& C, const V& p0, size_t len) {
    V out(len, 0);
    for (size_t k = 1; k <= p0.size(); ++k) {
        if (!p0[k - 1]) continue;
        u64 pref = 1;
        for (size_t i = 0; i < k; ++i) pref = C.mul(pref, C.alpha);
        for (size_t s = 0; s < len; ++s)
            out[s] = C.add(out[s], C.mul(C.mul(p0[k - 1], pref), C.binom((i32)(k - 1 + s), (i32)s)));
    }
    return out;
}
V taylora_p1(FiberContext& C, const V& p1, size_t len) {
    u64 am1 = C.sub(C.alpha, 1);
    u64 am1i = C.inv_unit(am1);
    u64 base = C.mul(C.alpha, am1i);
    u64 ratio = C.neg(am1i);
    V out(len, 0);
    for (size_t k = 1; k <= p1.size(); ++k) {
        if (!p1[k - 1]) continue;
        u64 pref = 1;
        for (size_t i = 0; i < k; ++i) pref = C.mul(pref, base);
        u64 rs = 1;
        for (size_t s = 0; s < len; ++s) {
            out[s] = C.add(out[s], C.mul(C.mul(p1[k - 1], C.mul(pref, rs)),
                                         C.binom((i32)(k - 1 + s), (i32)s)));
            rs = C.mul(rs, ratio);
        }
    }
    return out;
}
V taylora_pq(const FiberContext& C, const PV& pq, size_t len) {
    if (!len) return {};
    u64 am1 = C.sub(C.alpha, 1);
    u64 ai = C.inv_unit(C.alpha);
    V qs{C.mul(am1, ai), 0, ai};  // q = (s^2 + alpha - 1)/alpha
    V qi = series_inv(C, qs, len);
    V out(len, 0), acc{1};
    for (size_t k = 1; k <= pq.size(); ++k) {
        V nacc = conv(C, acc, qi);
        nacc.resize(std::min(nacc.size(), len));
        acc = nacc;
        u64 c = pq[k - 1][0], e = pq[k - 1][1];
        if (!c && !e) continue;
        u64 c0 = C.add(c, C.mul(e, ai)), c1 = C.neg(C.mul(e, ai));
        for (size_t s = 0; s < acc.size(); ++s) {
            if (!acc[s]) continue;
            if (c0) out[s] = C.add(out[s], C.mul(c0, acc[s]));
            if (c1 && s + 1 < len) out[s + 1] = C.add(out[s + 1], C.mul(c1, acc[s]));
        }
    }
    return out;
}

// principal part of (pole block) * (Taylor series of the analytic factor)
void principal_into(const FiberContext& C, V& out, const V& pole, const V& taylor) {
    for (size_t k = 1; k <= pole.size(); ++k) {
        if (!pole[k - 1]) continue;
        for (size_t s = 0; s < k && s < taylor.size(); ++s)
            if (taylor[s]) add_at(C, out, k - s - 1, C.mul(pole[k - 1], taylor[s]));
    }
}

// dense polynomial change of variable x = 1 - t (an involution)
V poly_flip1(FiberContext& C, const V& P) {
    V out(P.size(), 0);
    for (size_t i = 0; i < P.size(); ++i) {
        if (!P[i]) continue;
        u64 sign = 1;
        for (size_t s = 0; s <= i; ++s) {
            out[s] = C.add(out[s], C.mul(C.mul(P[i], C.binom((i32)i, (i32)s)), sign));
            sign = C.neg(sign);
        }
    }
    trimv(out);
    return out;
}
// x = (1 - s)/alpha
V poly_to_s(FiberContext& C, const V& P) {
    u64 ai = C.inv_unit(C.alpha);
    V out(P.size(), 0);
    u64 aipow = 1;
    for (size_t i = 0; i < P.size(); ++i) {
        if (P[i]) {
            u64 coef = C.mul(P[i], aipow);
            u64 sign = 1;
            for (size_t s = 0; s <= i; ++s) {
                out[s] = C.add(out[s], C.mul(C.mul(coef, C.binom((i32)i, (i32)s)), sign));
                sign = C.neg(sign);
            }
        }
        aipow = C.mul(aipow, ai);
    }
    trimv(out);
    return out;
}
// s^j = (1 - alpha x)^j back to x-coordinates
V poly_from_s(FiberContext& C, const V& S) {
    V out(S.size(), 0);
    for (size_t j = 0; j < S.size(); ++j) {
        if (!S[j]) continue;
        u64 apow = 1;
        for (size_t i = 0; i <= j; ++i) {
            u64 term = C.mul(C.mul(S[j], C.binom((i32)j, (i32)i)), apow);
            out[i] = C.add(out[i], (i % 2) ? C.neg(term) : term);
            apow = C.mul(apow, C.alpha);
        }
    }
    trimv(out);
    return out;
}

void guard_len(const FiberContext& C, size_t n) {
    if ((i32)n > C.lencap) throw DomainError("fiber: pole order guard exceeded");
}

} // namespace

// ---------------------------------------------------------------------------
// context

FiberContext::FiberContext(const UnramifiedRing& ring, i64 alpha_residue, i64 lift_a,
                           i32 floor_override, i32 kmax_override)
    : R(ring), p(ring.ctx.p), N(ring.ctx.N), W(ring.ctx.M), pW(ring.pM) {
    if (ring.d != 1) throw DomainError("fiber: coefficient ring must have degree 1");
    if (N < 2 || N > 3) throw DomainError("fiber: curve exponent outside 2..3");
    if ((p - 1) % N != 0) throw DomainError("fiber: need N | p - 1");
    if (W < 10) throw DomainError("fiber: ring precision too small");
    i64 ar = ((alpha_residue % p) + p) % p;
    if (ar == 0 || ar == 1) throw DomainError("fiber: alpha must avoid 0 and 1 mod p");
    alpha = R.teichmuller_elt(R.from_int(ar))[0];
    i64 av = ((lift_a % (i64)pW) + (i64)pW) % (i64)pW;
    if (av % p != 1) throw DomainError("fiber: lift parameter must be 1 mod p");
    a = (u64)av;
    floorv = floor_override ? floor_override : W - 5;
    if (floorv < 6 || floorv > W - 3) throw DomainError("fiber: bad drop floor");
    kmax = kmax_override;
    if (!kmax)
        for (i32 k = 1; k <= 4 * floorv + 8; ++k)
            if (k - 1 - vp((u64)k) < floorv) kmax = k;
    lencap = 6000;
}

u64 FiberContext::from_i64(i64 v) const {
    i64 m = (i64)pW;
    i64 r = v % m;
    if (r < 0) r += m;
    return (u64)r;
}

u64 FiberContext::inv_unit(u64 x) const {
    if (x % (u64)p == 0) throw NotInvertible("fiber: not a unit");
    u64 phi = pW / (u64)p * (u64)(p - 1);
    return powmod(x, phi - 1, pW);
}

i32 FiberContext::vp(u64 x) const {
    if (!x) return W;
    i32 v = 0;
    while (x % (u64)p == 0) { x /= (u64)p; ++v; }
    return v;
}

u64 FiberContext::divexact_p(u64 x, i32 k) const {
    for (i32 i = 0; i < k; ++i) {
        if (x % (u64)p) throw ReductionStall("fiber: expected divisibility by p failed");
        x /= (u64)p;
    }
    return x;
}

u64 FiberContext::ppow_small(i32 k) const {
    u64 r = 1;
    for (i32 i = 0; i < k; ++i) r *= (u64)p;
    return r;
}

u64 FiberContext::binom(i32 n, i32 k) {
    if (k < 0 || k > n) return 0;
    while ((i32)pascal_.size() <= n) {
        size_t r = pascal_.size();
        std::vector<u64> row(r + 1, 1);
        for (size_t j = 1; j < r; ++j)
            row[j] = add(pascal_[r - 1][j - 1], pascal_[r - 1][j]);
        pascal_.push_back(std::move(row));
        if ((i32)pascal_.size() > lencap) throw DomainError("fiber: binomial table guard");
    }
    return pascal_[(size_t)n][(size_t)k];
}

std::vector<u64> FiberContext::fpoly() const {
    V f{0, 1};
    V om{1, neg(1)};
    for (i64 i = 0; i + 1 < N; ++i) f = conv(*this, f, om);
    V la{1, neg(alpha)};
    return conv(*this, f, la);
}

std::vector<u64> FiberContext::q_base_inv(i32 family, i32 K) {
    auto& slot = qinv_[(size_t)family];
    if (slot.first < K) {
        V qk = vpow(*this, qdense(*this), K);
        slot = {K, inv_mod_qk(*this, family_base(*this, family), K, qk)};
    }
    if (slot.first == K) return slot.second;
    V qk = vpow(*this, qdense(*this), K);
    return polyrem(*this, slot.second, qk);
}

// ---------------------------------------------------------------------------
// block arithmetic

FiberRat rat_scale(const FiberContext& C, const FiberRat& F, u64 c) {
    FiberRat out;
    if (!c) return out;
    auto sc = [&](const V& v) {
        V o(v.size());
        for (size_t i = 0; i < v.size(); ++i) o[i] = C.mul(v[i], c);
        return o;
    };
    out.poly = sc(F.poly); out.p0 = sc(F.p0); out.p1 = sc(F.p1); out.pa = sc(F.pa);
    out.pq.resize(F.pq.size());
    for (size_t i = 0; i < F.pq.size(); ++i)
        out.pq[i] = Pair{C.mul(F.pq[i][0], c), C.mul(F.pq[i][1], c)};
    return out;
}

void rat_add_into(const FiberContext& C, FiberRat& acc, const FiberRat& F, u64 scale) {
    if (!scale) return;
    addv(C, acc.poly, F.poly, scale);
    addv(C, acc.p0, F.p0, scale);
    addv(C, acc.p1, F.p1, scale);
    addv(C, acc.pa, F.pa, scale);
    for (size_t i = 0; i < F.pq.size(); ++i)
        addq_at(C, acc.pq, i, C.mul(scale, F.pq[i][0]), C.mul(scale, F.pq[i][1]));
}

void rat_compress(const FiberContext& C, FiberRat& F) {
    auto dr = [&](V& v) {
        for (auto& c : v)
            if (c && C.vp(c) >= C.floorv) c = 0;
        trimv(v);
    };
    dr(F.poly); dr(F.p0); dr(F.p1); dr(F.pa);
    for (auto& pr : F.pq) {
        if (pr[0] && C.vp(pr[0]) >= C.floorv) pr[0] = 0;
        if (pr[1] && C.vp(pr[1]) >= C.floorv) pr[1] = 0;
    }
    trimq(F.pq);
}

i32 rat_min_vp(const FiberContext& C, const FiberRat& F) {
    i32 m = C.W;
    auto scan = [&](const V& v) {
        for (u64 c : v)
            if (c) m = std::min(m, C.vp(c));
    };
    scan(F.poly); scan(F.p0); scan(F.p1); scan(F.pa);
    for (const auto& pr : F.pq) {
        if (pr[0]) m = std::min(m, C.vp(pr[0]));
        if (pr[1]) m = std::min(m, C.vp(pr[1]));
    }
    return m;
}

u64 rat_eval(const FiberContext& C, const FiberRat& F, u64 x0) {
    u64 t0 = C.sub(1, x0), a0 = C.sub(1, C.mul(C.alpha, x0));
    u64 q0 = C.add(C.sub(C.mul(C.mul(C.alpha, x0), x0), C.add(x0, x0)), 1);
    if (C.vp(x0) || C.vp(t0) || C.vp(a0) || C.vp(q0))
        throw DomainError("fiber: evaluation point meets a pole disk");
    u64 r = 0;
    for (size_t i = F.poly.size(); i >= 1; --i) {
        r = C.mul(r, x0);
        r = C.add(r, F.poly[i - 1]);
        if (i == 1) break;
    }
    auto horner_inv = [&](const V& v, u64 b) {
        u64 bi = C.inv_unit(b), acc = 0;
        for (size_t k = v.size(); k >= 1; --k) {
            acc = C.mul(C.add(acc, v[k - 1]), bi);
            if (k == 1) break;
        }
        return acc;
    };
    if (!F.p0.empty()) r = C.add(r, horner_inv(F.p0, x0));
    if (!F.p1.empty()) r = C.add(r, horner_inv(F.p1, t0));
    if (!F.pa.empty()) r = C.add(r, horner_inv(F.pa, a0));
    if (!F.pq.empty()) {
        u64 qi = C.inv_unit(q0), acc = 0;
        for (size_t k = F.pq.size(); k >= 1; --k) {
            acc = C.mul(C.add(acc, C.add(F.pq[k - 1][0], C.mul(F.pq[k - 1][1], x0))), qi);
            if (k == 1) break;
        }
        r = C.add(r, acc);
    }
    return r;
}

FiberRat rat_mul(FiberContext& C, const FiberRat& F, const FiberRat& G) {
    FiberRat out;
    V& po = out.poly; V& z0 = out.p0; V& o1 = out.p1; V& aa = out.pa; PV& qq = out.pq;

    po = conv(C, F.poly, G.poly);

    auto poly_p0 = [&](const V& P, const V& Z) {
        for (size_t i = 0; i < P.size(); ++i) {
            if (!P[i]) continue;
            for (size_t k = 1; k <= Z.size(); ++k) {
                if (!Z[k - 1]) continue;
                u64 c = C.mul(P[i], Z[k - 1]);
                if (i >= k) add_at(C, po, i - k, c);
                else add_at(C, z0, k - i - 1, c);
            }
        }
    };
    auto poly_p1 = [&](const V& P, const V& O) {
        if (P.empty() || O.empty()) return;
        V Pt = poly_flip1(C, P);
        V tacc;
        for (size_t i = 0; i < Pt.size(); ++i) {
            if (!Pt[i]) continue;
            for (size_t k = 1; k <= O.size(); ++k) {
                if (!O[k - 1]) continue;
                u64 c = C.mul(Pt[i], O[k - 1]);
                if (i >= k) add_at(C, tacc, i - k, c);
                else add_at(C, o1, k - i - 1, c);
            }
        }
        addv(C, po, poly_flip1(C, tacc));
    };
    auto poly_pa = [&](const V& P, const V& A) {
        if (P.empty() || A.empty()) return;
        V Ps = poly_to_s(C, P);
        V sacc;
        for (size_t i = 0; i < Ps.size(); ++i) {
            if (!Ps[i]) continue;
            for (size_t k = 1; k <= A.size(); ++k) {
                if (!A[k - 1]) continue;
                u64 c = C.mul(Ps[i], A[k - 1]);
                if (i >= k) add_at(C, sacc, i - k, c);
                else add_at(C, aa, k - i - 1, c);
            }
        }
        addv(C, po, poly_from_s(C, sacc));
    };
    auto poly_pq = [&](const V& P, const PV& Q) {
        if (P.empty() || Q.empty()) return;
        for (size_t k = 1; k <= Q.size(); ++k) {
            if (!Q[k - 1][0] && !Q[k - 1][1]) continue;
            V num = conv(C, P, V{Q[k - 1][0], Q[k - 1][1]});
            num_over_q(C, num, (i32)k, qq, po);
        }
    };
    poly_p0(F.poly, G.p0); poly_p0(G.poly, F.p0);
    poly_p1(F.poly, G.p1); poly_p1(G.poly, F.p1);
    poly_pa(F.poly, G.pa); poly_pa(G.poly, F.pa);
    poly_pq(F.poly, G.pq); poly_pq(G.poly, F.pq);

    for (size_t k = 1; k <= F.p0.size(); ++k)
        if (F.p0[k - 1])
            for (size_t m = 1; m <= G.p0.size(); ++m)
                if (G.p0[m - 1]) add_at(C, z0, k + m - 1, C.mul(F.p0[k - 1], G.p0[m - 1]));
    for (size_t k = 1; k <= F.p1.size(); ++k)
        if (F.p1[k - 1])
            for (size_t m = 1; m <= G.p1.size(); ++m)
                if (G.p1[m - 1]) add_at(C, o1, k + m - 1, C.mul(F.p1[k - 1], G.p1[m - 1]));
    for (size_t k = 1; k <= F.pa.size(); ++k)
        if (F.pa[k - 1])
            for (size_t m = 1; m <= G.pa.size(); ++m)
                if (G.pa[m - 1]) add_at(C, aa, k + m - 1, C.mul(F.pa[k - 1], G.pa[m - 1]));
    if (!F.pq.empty() && !G.pq.empty()) {
        V num = conv(C, pq_lift(C, F.pq), pq_lift(C, G.pq));
        V spill;
        num_over_q(C, num, (i32)(F.pq.size() + G.pq.size()), qq, spill);
        trimv(spill);
        if (!spill.empty()) throw DomainError("fiber: improper q-product");
    }

    // cross products between distinct centers: sum of the two principal parts
    if (!F.p0.empty() && !G.p1.empty()) {
        principal_into(C, z0, F.p0, taylor0_p1(C, G.p1, F.p0.size()));
        principal_into(C, o1, G.p1, taylor1_p0(C, F.p0, G.p1.size()));
    }
    if (!G.p0.empty() && !F.p1.empty()) {
        principal_into(C, z0, G.p0, taylor0_p1(C, F.p1, G.p0.size()));
        principal_into(C, o1, F.p1, taylor1_p0(C, G.p0, F.p1.size()));
    }
    if (!F.p0.empty() && !G.pa.empty()) {
        principal_into(C, z0, F.p0, taylor0_pa(C, G.pa, F.p0.size()));
        principal_into(C, aa, G.pa, taylora_p0(C, F.p0, G.pa.size()));
    }
    if (!G.p0.empty() && !F.pa.empty()) {
        principal_into(C, z0, G.p0, taylor0_pa(C, F.pa, G.p0.size()));
        principal_into(C, aa, F.pa, taylora_p0(C, G.p0, F.pa.size()));
    }
    if (!F.p1.empty() && !G.pa.empty()) {
        principal_into(C, o1, F.p1, taylor1_pa(C, G.pa, F.p1.size()));
        principal_into(C, aa, G.pa, taylora_p1(C, F.p1, G.pa.size()));
    }
    if (!G.p1.empty() && !F.pa.empty()) {
        principal_into(C, o1, G.p1, taylor1_pa(C, F.pa, G.p1.size()));
        principal_into(C, aa, F.pa, taylora_p1(C, G.p1, F.pa.size()));
    }

    auto qcross = [&](const V& A, i32 family, V& outA, const PV& Q, const V& tayQ) {
        if (A.empty() || Q.empty()) return;
        principal_into(C, outA, A, tayQ);
        i32 K = (i32)Q.size();
        V qk = vpow(C, qdense(C), K);
        V am = pole_mod_qk(C, A, family, K, qk);
        V dig = mulrem(C, pq_lift(C, Q), am, qk);
        V spill;
        num_over_q(C, dig, K, qq, spill);
        trimv(spill);
        if (!spill.empty()) throw DomainError("fiber: improper q-cross");
    };
    qcross(F.p0, 0, z0, G.pq, taylor0_pq(C, G.pq, F.p0.size()));
    qcross(G.p0, 0, z0, F.pq, taylor0_pq(C, F.pq, G.p0.size()));
    qcross(F.p1, 1, o1, G.pq, taylor1_pq(C, G.pq, F.p1.size()));
    qcross(G.p1, 1, o1, F.pq, taylor1_pq(C, F.pq, G.p1.size()));
    qcross(F.pa, 2, aa, G.pq, taylora_pq(C, G.pq, F.pa.size()));
    qcross(G.pa, 2, aa, F.pq, taylora_pq(C, F.pq, G.pa.size()));

    guard_len(C, po.size());
    guard_len(C, z0.size());
    guard_len(C, o1.size());
    guard_len(C, aa.size());
    guard_len(C, qq.size());
    rat_compress(C, out);
    return out;
}

FiberRat rat_derivative(const FiberContext& C, const FiberRat& F) {
    FiberRat out;
    for (size_t i = 1; i < F.poly.size(); ++i)
        add_at(C, out.poly, i - 1, C.mul(F.poly[i], C.from_i64((i64)i)));
    for (size_t k = 1; k <= F.p0.size(); ++k)
        if (F.p0[k - 1]) add_at(C, out.p0, k, C.mul(F.p0[k - 1], C.from_i64(-(i64)k)));
    for (size_t k = 1; k <= F.p1.size(); ++k)
        if (F.p1[k - 1]) add_at(C, out.p1, k, C.mul(F.p1[k - 1], C.from_i64((i64)k)));
    for (size_t k = 1; k <= F.pa.size(); ++k)
        if (F.pa[k - 1]) add_at(C, out.pa, k, C.mul(C.mul(F.pa[k - 1], C.alpha), C.from_i64((i64)k)));
    for (size_t k = 1; k <= F.pq.size(); ++k) {
        u64 c = F.pq[k - 1][0], e = F.pq[k - 1][1];
        if (!c && !e) continue;
        addq_at(C, out.pq, k - 1, e, 0);
        // -k (c + e x) q' q^-(k+1), q' = 2 alpha x - 2
        V num = conv(C, V{c, e}, V{C.neg(C.from_i64(2)), C.add(C.alpha, C.alpha)});
        V spill;
        num_over_q(C, num, (i32)k + 1, out.pq, spill, C.from_i64(-(i64)k));
        trimv(spill);
        if (!spill.empty()) throw DomainError("fiber: derivative spill");
    }
    return out;
}

FiberRat rat_sigma(FiberContext& C, const FiberRat& F) {
    if (F.poly.size() > 24 || F.p0.size() > 24 || F.p1.size() > 12 || F.pa.size() > 12 ||
        F.pq.size() > 12)
        throw DomainError("fiber: sigma applied to a deep pole block");
    FiberRat out;
    u64 ai = C.inv_unit(C.a);
    u64 ap = 1;
    for (size_t i = 0; i < F.poly.size(); ++i) {
        if (F.poly[i]) add_at(C, out.poly, i * (size_t)C.p, C.mul(F.poly[i], ap));
        ap = C.mul(ap, C.a);
    }
    u64 aip = 1;
    for (size_t k = 1; k <= F.p0.size(); ++k) {
        aip = C.mul(aip, ai);
        if (F.p0[k - 1]) add_at(C, out.p0, k * (size_t)C.p - 1, C.mul(F.p0[k - 1], aip));
    }
    for (size_t k = 1; k <= F.p1.size(); ++k)
        if (F.p1[k - 1]) rat_add_into(C, out, C.sig_inv1_pow((i32)k), F.p1[k - 1]);
    for (size_t k = 1; k <= F.pa.size(); ++k)
        if (F.pa[k - 1]) rat_add_into(C, out, C.sig_inva_pow((i32)k), F.pa[k - 1]);
    for (size_t k = 1; k <= F.pq.size(); ++k) {
        u64 c = F.pq[k - 1][0], e = F.pq[k - 1][1];
        if (!c && !e) continue;
        FiberRat numer;
        add_at(C, numer.poly, 0, c);
        add_at(C, numer.poly, (size_t)C.p, C.mul(e, C.a));
        rat_add_into(C, out, rat_mul(C, numer, C.sig_invq_pow((i32)k)));
    }
    rat_compress(C, out);
    return out;
}

// ---------------------------------------------------------------------------
// sigma expansions

const FiberRat& FiberContext::sig_inv1() { if (!have_sig_) build_sigma_expansions_(); return sinv1_; }
const FiberRat& FiberContext::sig_inva() { if (!have_sig_) build_sigma_expansions_(); return sinva_; }
const FiberRat& FiberContext::sig_invq() { if (!have_sig_) build_sigma_expansions_(); return sinvq_; }
const FiberRat& FiberContext::y_lift() { if (!have_sig_) build_sigma_expansions_(); return ylift_; }

const FiberRat& FiberContext::y_lift_pow(i32 j) {
    if (!have_sig_) build_sigma_expansions_();
    while ((i32)ylift_pows_.size() <= j)
        ylift_pows_.push_back(rat_mul(*this, ylift_pows_.back(), ylift_));
    return ylift_pows_[(size_t)j];
}

const FiberRat& FiberContext::sig_inv1_pow(i32 k) {
    sig_inv1();
    while ((i32)sinv1_pows_.size() < k)
        sinv1_pows_.push_back(sinv1_pows_.empty() ? sinv1_
                                                  : rat_mul(*this, sinv1_pows_.back(), sinv1_));
    return sinv1_pows_[(size_t)k - 1];
}
const FiberRat& FiberContext::sig_inva_pow(i32 k) {
    sig_inva();
    while ((i32)sinva_pows_.size() < k)
        sinva_pows_.push_back(sinva_pows_.empty() ? sinva_
                                                  : rat_mul(*this, sinva_pows_.back(), sinva_));
    return sinva_pows_[(size_t)k - 1];
}
const FiberRat& FiberContext::sig_invq_pow(i32 k) {
    sig_invq();
    while ((i32)sinvq_pows_.size() < k)
        sinvq_pows_.push_back(sinvq_pows_.empty() ? sinvq_
                                                  : rat_mul(*this, sinvq_pows_.back(), sinvq_));
    return sinvq_pows_[(size_t)k - 1];
}

void FiberContext::build_sigma_expansions_() {
    have_sig_ = true;
    // P(t) = 1 - a(1-t)^p = a t^p + p g(t); the same coefficients serve the
    // 1/alpha-disk because alpha^(p-1) = 1 makes both disk equations match
    V P((size_t)p + 1, 0);
    P[0] = sub(1, a);
    for (i64 j = 1; j <= p; ++j) {
        u64 term = mul(a, binom((i32)p, (i32)j));
        P[(size_t)j] = (j % 2) ? term : neg(term);
    }
    if (P[(size_t)p] != a) throw MismatchError("fiber: lift polynomial leading term");
    V g((size_t)p, 0);
    for (i64 j = 0; j < p; ++j) g[(size_t)j] = divexact_p(P[(size_t)j], 1);
    u64 ainv = inv_unit(a);
    V gk{1};
    u64 sc = ainv;  // running (-p)^k a^-(k+1)
    for (i32 k = 0; k < floorv; ++k) {
        if (k) {
            gk = conv(*this, gk, g);
            sc = mul(sc, neg(mul(ainv, R.ppow[1])));
        }
        if (vp(sc) >= floorv) break;
        for (size_t i = 0; i < gk.size(); ++i) {
            if (!gk[i]) continue;
            i64 order = p * (k + 1) - (i64)i;
            if (order < 1) throw MismatchError("fiber: lift expansion order");
            add_at(*this, sinv1_.p1, (size_t)order - 1, mul(sc, gk[i]));
        }
    }
    rat_compress(*this, sinv1_);
    sinva_.pa = sinv1_.p1;

    // q(a x^p)^-1 = q^-p (1 + p W q^-p)^-1
    V qa((size_t)(2 * p) + 1, 0);
    qa[0] = 1;
    qa[(size_t)p] = neg(add(a, a));
    qa[(size_t)(2 * p)] = mul(alpha, mul(a, a));
    V qp = vpow(*this, qdense(*this), p);
    V Wn(qa.size(), 0);
    for (size_t i = 0; i < qa.size(); ++i)
        Wn[i] = divexact_p(sub(qa[i], i < qp.size() ? qp[i] : 0), 1);
    trimv(Wn);
    V wk{1};
    u64 wsc = 1;
    for (i32 k = 0; k < floorv; ++k) {
        if (k) {
            wk = conv(*this, wk, Wn);
            wsc = mul(wsc, neg(R.ppow[1]));
        }
        if (vp(wsc) >= floorv) break;
        V spill;
        num_over_q(*this, wk, p * (k + 1), sinvq_.pq, spill, wsc);
        trimv(spill);
        if (!spill.empty()) throw MismatchError("fiber: q-lift expansion spill");
    }
    rat_compress(*this, sinvq_);

    auto check_inverse = [&](const FiberRat& inv, const V& poly, const char* what) {
        FiberRat pol; pol.poly = poly;
        FiberRat prod = rat_mul(*this, inv, pol);
        prod.poly.resize(std::max<size_t>(prod.poly.size(), 1), 0);
        prod.poly[0] = sub(prod.poly[0], 1);
        if (rat_min_vp(*this, prod) < floorv - 2) throw MismatchError(what);
    };
    V onep((size_t)p + 1, 0);
    onep[0] = 1;
    onep[(size_t)p] = neg(a);
    check_inverse(sinv1_, onep, "fiber: 1-disk lift inverse residual");
    V onea((size_t)p + 1, 0);
    onea[0] = 1;
    onea[(size_t)p] = neg(mul(alpha, a));
    check_inverse(sinva_, onea, "fiber: 1/alpha-disk lift inverse residual");
    check_inverse(sinvq_, qa, "fiber: q-disk lift inverse residual");

    // u = (f(x^sigma)/f(x)^p)^(1/N), then the y-lift is f^((p-1)/N) u
    FiberRat rho;
    {
        V pp = vpow(*this, onep, N - 1);
        pp = conv(*this, pp, onea);
        for (auto& c : pp) c = mul(c, a);
        FiberRat t1; t1.poly = pp;
        FiberRat t2; t2.p1.assign((size_t)((N - 1) * p), 0); t2.p1.back() = 1;
        FiberRat t3; t3.pa.assign((size_t)p, 0); t3.pa.back() = 1;
        rho = rat_mul(*this, rat_mul(*this, t1, t2), t3);
    }
    FiberRat w = rho;
    w.poly.resize(std::max<size_t>(w.poly.size(), 1), 0);
    w.poly[0] = sub(w.poly[0], 1);
    auto divp_all = [&](FiberRat& F) {
        for (auto& c : F.poly) c = divexact_p(c, 1);
        for (auto& c : F.p0) c = divexact_p(c, 1);
        for (auto& c : F.p1) c = divexact_p(c, 1);
        for (auto& c : F.pa) c = divexact_p(c, 1);
        for (auto& pr : F.pq) { pr[0] = divexact_p(pr[0], 1); pr[1] = divexact_p(pr[1], 1); }
    };
    divp_all(w);
    FiberRat u; u.poly = {1};
    FiberRat wp; wp.poly = {1};
    u64 bk = 1;
    u64 Ninv = inv_unit(from_i64(N));
    for (i32 k = 1; k < floorv; ++k) {
        wp = rat_mul(*this, wp, w);
        u64 num = mul(bk, sub(Ninv, from_i64(k - 1)));
        i32 kv = vp((u64)k);
        bk = mul(divexact_p(num, kv), inv_unit((u64)k / ppow_small(kv)));
        u64 scale = mul(bk, R.ppow[(size_t)k]);
        if (vp(scale) >= floorv) break;
        rat_add_into(*this, u, wp, scale);
    }
    rat_compress(*this, u);
    {
        FiberRat un; un.poly = {1};
        for (i64 i = 0; i < N; ++i) un = rat_mul(*this, un, u);
        rat_add_into(*this, un, rho, pW - 1);
        if (rat_min_vp(*this, un) < floorv - 2)
            throw MismatchError("fiber: y-lift root residual");
    }
    FiberRat fp; fp.poly = vpow(*this, fpoly(), (p - 1) / N);
    ylift_ = rat_mul(*this, fp, u);
    ylift_pows_.clear();
    FiberRat one; one.poly = {1};
    ylift_pows_.push_back(std::move(one));
    ylift_pows_.push_back(ylift_);
}

// ---------------------------------------------------------------------------
// y-graded layer

FiberFun fun_from_rat(FiberRat r, i64 N) {
    FiberFun F;
    F.yc.resize((size_t)N);
    F.yc[0] = std::move(r);
    return F;
}

void fun_add_into(const FiberContext& C, FiberFun& acc, const FiberFun& F, u64 scale) {
    if (acc.yc.size() < F.yc.size()) acc.yc.resize(F.yc.size());
    for (size_t j = 0; j < F.yc.size(); ++j) rat_add_into(C, acc.yc[j], F.yc[j], scale);
}

i32 fun_min_vp(const FiberContext& C, const FiberFun& F) {
    i32 m = C.W;
    for (const auto& r : F.yc) m = std::min(m, rat_min_vp(C, r));
    return m;
}

FiberFun fun_mul(FiberContext& C, const FiberFun& F, const FiberFun& G) {
    size_t N = (size_t)C.N;
    std::vector<FiberRat> tmp(2 * N - 1);
    for (size_t i = 0; i < F.yc.size(); ++i) {
        if (F.yc[i].empty()) continue;
        for (size_t j = 0; j < G.yc.size(); ++j) {
            if (G.yc[j].empty()) continue;
            rat_add_into(C, tmp[i + j], rat_mul(C, F.yc[i], G.yc[j]));
        }
    }
    FiberFun out;
    out.yc.resize(N);
    FiberRat f;
    f.poly = C.fpoly();
    for (size_t t = 0; t < 2 * N - 1; ++t) {
        if (tmp[t].empty()) continue;
        if (t < N) rat_add_into(C, out.yc[t], tmp[t]);
        else rat_add_into(C, out.yc[t - N], rat_mul(C, tmp[t], f));
    }
    for (auto& r : out.yc) rat_compress(C, r);
    return out;
}

FiberFun fun_pow(FiberContext& C, const FiberFun& F, u64 e) {
    FiberFun r = fun_from_rat(FiberRat{{1}, {}, {}, {}, {}}, C.N);
    FiberFun base = F;
    while (e) {
        if (e & 1) r = fun_mul(C, r, base);
        if (e >>= 1) base = fun_mul(C, base, base);
    }
    return r;
}

FiberFun fun_sigma(FiberContext& C, const FiberFun& F) {
    FiberFun out;
    out.yc.resize(F.yc.size());
    for (size_t j = 0; j < F.yc.size(); ++j) {
        if (F.yc[j].empty()) continue;
        FiberRat s = rat_sigma(C, F.yc[j]);
        out.yc[j] = j ? rat_mul(C, s, C.y_lift_pow((i32)j)) : std::move(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// forms

FiberForm monomial_form(const FiberContext& C, i32 n, FiberRat T) {
    if (n < 0 || n >= C.N) throw DomainError("fiber: component outside 0..N-1");
    FiberForm out;
    out.wc.resize((size_t)C.N);
    out.wc[(size_t)n] = std::move(T);
    return out;
}

FiberForm basis_form(FiberContext& C, i32 n, bool eta) {
    if (n < 1 || n >= C.N) throw DomainError("fiber: basis component outside 1..N-1");
    V m{0, 1};
    V om{1, C.neg(1)};
    for (i32 i = 0; i + 1 < n; ++i) m = conv(C, m, om);  // x (1-x)^(n-1)
    FiberRat T;
    if (!eta) {
        T.poly.assign(m.begin() + 1, m.end());  // omega drops the x factor
    } else {
        FiberRat num; num.poly = m;
        FiberRat ainv; ainv.pa = {1};
        T = rat_mul(C, num, ainv);
    }
    return monomial_form(C, n, std::move(T));
}

void form_add_into(const FiberContext& C, FiberForm& acc, const FiberForm& F, u64 scale) {
    if (acc.wc.size() < F.wc.size()) acc.wc.resize(F.wc.size());
    for (size_t n = 0; n < F.wc.size(); ++n) rat_add_into(C, acc.wc[n], F.wc[n], scale);
}

FiberForm exact_form(FiberContext& C, i32 n, const FiberRat& G) {
    if (n < 0 || n >= C.N) throw DomainError("fiber: component outside 0..N-1");
    FiberRat D = rat_derivative(C, G);
    if (n) {
        FiberRat flogd;  // f'/f
        flogd.p0 = {1};
        flogd.p1 = {C.from_i64(-(C.N - 1))};
        flogd.pa = {C.neg(C.alpha)};
        u64 nN = C.mul(C.from_i64(n), C.inv_unit(C.from_i64(C.N)));
        rat_add_into(C, D, rat_mul(C, flogd, G), C.neg(nN));
    }
    return monomial_form(C, n, std::move(D));
}

// ---------------------------------------------------------------------------
// symbol machinery

namespace {

struct EntryData {
    FiberFun L, G;  // twisted log and the dlog dx-coefficient
};

// p^(k-1)/k with the unit part inverted; 0 once it cannot affect the window
u64 log_scalar(const FiberContext& C, i32 k) {
    i32 kv = C.vp((u64)k);
    i32 e = k - 1 - kv;
    if (e >= C.W) return 0;
    u64 unit = C.inv_unit((u64)k / C.ppow_small(kv));
    return C.mul(C.R.ppow[(size_t)e], unit);
}

FiberFun log_from_z(FiberContext& C, const FiberFun& z) {
    FiberFun L = fun_from_rat(FiberRat{}, C.N);
    FiberFun zp = fun_from_rat(FiberRat{{1}, {}, {}, {}, {}}, C.N);
    for (i32 k = 1; k <= C.kmax; ++k) {
        zp = fun_mul(C, zp, z);
        u64 s = log_scalar(C, k);
        if (!s) continue;
        fun_add_into(C, L, zp, (k % 2) ? s : C.neg(s));
    }
    return L;
}

FiberRat rat_one() { return FiberRat{{1}, {}, {}, {}, {}}; }

void rat_sub_one(const FiberContext& C, FiberRat& F) {
    if (F.poly.empty()) F.poly.resize(1, 0);
    F.poly[0] = C.sub(F.poly[0], 1);
}

void fun_divexact_p(const FiberContext& C, FiberFun& F) {
    for (auto& r : F.yc) {
        for (auto& c : r.poly) c = C.divexact_p(c, 1);
        for (auto& c : r.p0) c = C.divexact_p(c, 1);
        for (auto& c : r.p1) c = C.divexact_p(c, 1);
        for (auto& c : r.pa) c = C.divexact_p(c, 1);
        for (auto& pr : r.pq) { pr[0] = C.divexact_p(pr[0], 1); pr[1] = C.divexact_p(pr[1], 1); }
    }
}

std::vector<u64> mu_n_roots(const FiberContext& C) {
    std::vector<u64> roots;
    for (i64 r = 1; r < C.p; ++r)
        if (powmod((u64)r, (u64)C.N, (u64)C.p) == 1)
            roots.push_back(C.R.teichmuller_elt(C.R.from_int(r))[0]);
    return roots;
}

// y - z(1-x)
FiberFun linear_entry(const FiberContext& C, u64 z) {
    FiberFun A;
    A.yc.resize((size_t)C.N);
    A.yc[0].poly = {C.neg(z), z};
    A.yc[1].poly = {1};
    return A;
}

// inverse through the conjugate product: the norm over mu_N of y - z(1-x)
// is (-1)^N (1-x)^(N-1) q
FiberFun linear_inverse(FiberContext& C, u64 z, const std::vector<u64>& mu) {
    FiberFun conj = fun_from_rat(rat_one(), C.N);
    u64 prod_mu = 1;
    for (u64 zeta : mu) {
        prod_mu = C.mul(prod_mu, zeta);
        if (zeta == 1) continue;
        FiberFun g;
        g.yc.resize((size_t)C.N);
        g.yc[0].poly = {C.neg(z), z};
        g.yc[1].poly = {zeta};
        conj = fun_mul(C, conj, g);
    }
    u64 sc = C.inv_unit(C.neg(prod_mu));
    FiberRat rad;
    rad.p1.assign((size_t)(C.N - 1), 0);
    rad.p1.back() = 1;
    FiberRat qinv;
    qinv.pq = {Pair{1, 0}};
    FiberRat radical = rat_mul(C, rad, qinv);
    FiberFun out;
    out.yc.resize((size_t)C.N);
    for (size_t j = 0; j < conj.yc.size(); ++j)
        if (!conj.yc[j].empty())
            out.yc[j] = rat_scale(C, rat_mul(C, conj.yc[j], radical), sc);
    return out;
}

// sigma image of y - z(1-x)
FiberFun linear_sigma(FiberContext& C, u64 z) {
    FiberFun A;
    A.yc.resize((size_t)C.N);
    A.yc[0].poly.assign((size_t)C.p + 1, 0);
    A.yc[0].poly[0] = C.neg(z);
    A.yc[0].poly[(size_t)C.p] = C.mul(z, C.a);
    A.yc[1] = C.y_lift();
    return A;
}

FiberFun linear_sigma_inverse(FiberContext& C, u64 z, const std::vector<u64>& mu) {
    FiberFun conj = fun_from_rat(rat_one(), C.N);
    u64 prod_mu = 1;
    for (u64 zeta : mu) {
        prod_mu = C.mul(prod_mu, zeta);
        if (zeta == 1) continue;
        FiberFun g;
        g.yc.resize((size_t)C.N);
        g.yc[0].poly.assign((size_t)C.p + 1, 0);
        g.yc[0].poly[0] = C.neg(z);
        g.yc[0].poly[(size_t)C.p] = C.mul(z, C.a);
        g.yc[1] = rat_scale(C, C.y_lift(), zeta);
        conj = fun_mul(C, conj, g);
    }
    u64 sc = C.inv_unit(C.neg(prod_mu));
    FiberRat radical = C.sig_inv1_pow((i32)C.N - 1);
    radical = rat_mul(C, radical, C.sig_invq_pow(1));
    FiberFun out;
    out.yc.resize((size_t)C.N);
    for (size_t j = 0; j < conj.yc.size(); ++j)
        if (!conj.yc[j].empty())
            out.yc[j] = rat_scale(C, rat_mul(C, conj.yc[j], radical), sc);
    FiberFun prod = fun_mul(C, linear_sigma(C, z), out);
    rat_sub_one(C, prod.yc[0]);
    if (fun_min_vp(C, prod) < C.floorv - 3)
        throw MismatchError("fiber: sigma-side inverse residual");
    return out;
}

// d(y - z(1-x))/dx coefficient: z + y f'/(N f)
FiberFun linear_dcoef(const FiberContext& C, u64 z) {
    FiberFun D;
    D.yc.resize((size_t)C.N);
    D.yc[0].poly = {z};
    u64 Ninv = C.inv_unit(C.from_i64(C.N));
    D.yc[1].p0 = {Ninv};
    D.yc[1].p1 = {C.mul(C.from_i64(-(C.N - 1)), Ninv)};
    D.yc[1].pa = {C.neg(C.mul(C.alpha, Ninv))};
    return D;
}

EntryData build_h1(FiberContext& C, const SymbolChoice& zs) {
    if (zs.zeta1.R != &C.R || zs.zeta2.R != &C.R)
        throw DomainError("fiber: symbol roots live in a different ring");
    if (zs.zeta1.neg || zs.zeta2.neg)
        throw DomainError("fiber: symbol roots must be integral");
    u64 z1 = zs.zeta1.c[0], z2 = zs.zeta2.c[0];
    if (powmod(z1, (u64)C.N, C.pW) != 1 || powmod(z2, (u64)C.N, C.pW) != 1 || z1 == z2)
        throw DomainError("fiber: symbol roots must be distinct mu_N elements");
    auto mu = mu_n_roots(C);
    FiberFun A = linear_entry(C, z1), B = linear_entry(C, z2);
    FiberFun Ainv = linear_inverse(C, z1, mu), Binv = linear_inverse(C, z2, mu);
    {
        FiberFun prod = fun_mul(C, A, Ainv);
        rat_sub_one(C, prod.yc[0]);
        if (fun_min_vp(C, prod) < C.floorv - 2)
            throw MismatchError("fiber: entry inverse residual");
    }
    EntryData E;
    {
        FiberFun dA = linear_dcoef(C, z1), dB = linear_dcoef(C, z2);
        E.G = fun_mul(C, dA, Ainv);
        fun_add_into(C, E.G, fun_mul(C, dB, Binv), C.pW - 1);
    }
    FiberFun hp = fun_mul(C, fun_pow(C, A, (u64)C.p), fun_pow(C, Binv, (u64)C.p));
    FiberFun rho = fun_mul(C, fun_mul(C, hp, linear_sigma(C, z2)),
                           linear_sigma_inverse(C, z1, mu));
    rat_sub_one(C, rho.yc[0]);
    if (fun_min_vp(C, rho) < 1) throw MismatchError("fiber: symbol ratio is not a 1-unit");
    fun_divexact_p(C, rho);
    E.L = log_from_z(C, rho);
    return E;
}

EntryData build_h2(FiberContext& C) {
    EntryData E;
    FiberRat G;
    G.p0 = {C.from_i64(2)};
    G.p1 = {C.from_i64(2)};
    E.G = fun_from_rat(std::move(G), C.N);
    // ratio of the p-th power to the sigma image:
    // (1-alpha)^(p-1) a^-2 (1 - a x^p)^2 (1-x)^-2p
    V onep((size_t)C.p + 1, 0);
    onep[0] = 1;
    onep[(size_t)C.p] = C.neg(C.a);
    FiberRat r1;
    r1.poly = conv(C, onep, onep);
    u64 sc = powmod(C.sub(1, C.alpha), (u64)(C.p - 1), C.pW);
    sc = C.mul(sc, C.inv_unit(C.mul(C.a, C.a)));
    r1 = rat_scale(C, r1, sc);
    FiberRat r2;
    r2.p1.assign((size_t)(2 * C.p), 0);
    r2.p1.back() = 1;
    FiberRat rho = rat_mul(C, r1, r2);
    rat_sub_one(C, rho);
    FiberFun z = fun_from_rat(std::move(rho), C.N);
    fun_divexact_p(C, z);
    E.L = log_from_z(C, z);
    return E;
}

EntryData build_const(FiberContext& C, const PadicScalar& cv) {
    if (cv.R != &C.R) throw DomainError("fiber: constant lives in a different ring");
    if (cv.neg != 0 || C.vp(cv.c[0]) != 0)
        throw DomainError("fiber: constant entry must be a unit");
    u64 c = cv.c[0];
    u64 tc = C.R.teichmuller_elt(cv.c)[0];
    u64 c1 = C.mul(c, C.inv_unit(tc));
    u64 m = C.divexact_p(C.sub(c1, 1), 1);
    u64 L = 0, mp = 1;
    for (i32 k = 1; k <= C.kmax; ++k) {
        mp = C.mul(mp, m);
        u64 s = C.mul(log_scalar(C, k), mp);
        L = (k % 2) ? C.add(L, s) : C.sub(L, s);
    }
    L = C.mul(L, C.from_i64(C.p - 1));
    EntryData E;
    E.L = fun_from_rat(FiberRat{{L}, {}, {}, {}, {}}, C.N);
    E.G = fun_from_rat(FiberRat{}, C.N);
    return E;
}

EntryData build_entry(FiberContext& C, FiberFn fn, const FiberSymbol& sym) {
    switch (fn) {
        case FiberFn::H1: return build_h1(C, sym.zs);
        case FiberFn::H2: return build_h2(C);
        default: return build_const(C, sym.const_value);
    }
}

} // namespace

FiberForm syntomic_one_form(FiberContext& C, const FiberSymbol& sym) {
    EntryData E1 = build_entry(C, sym.first, sym);
    EntryData E2 = (sym.second == sym.first) ? E1 : build_entry(C, sym.second, sym);
    // p^-1 dlog(g^sigma) has dx-coefficient a x^(p-1) sigma(dlog g coefficient)
    FiberRat mono;
    mono.poly.assign((size_t)C.p, 0);
    mono.poly.back() = C.a;
    FiberFun tw = fun_sigma(C, E2.G);
    for (auto& r : tw.yc)
        if (!r.empty()) r = rat_mul(C, r, mono);
    FiberFun w = fun_mul(C, E1.L, tw);
    fun_add_into(C, w, fun_mul(C, E2.L, E1.G), C.pW - 1);
    // regrade y^j dx (j > 0) as f y^(j-N) dx
    FiberForm out;
    out.wc.resize((size_t)C.N);
    out.wc[0] = w.yc[0];
    FiberRat f;
    f.poly = C.fpoly();
    for (size_t j = 1; j < w.yc.size(); ++j)
        if (!w.yc[j].empty())
            rat_add_into(C, out.wc[(size_t)C.N - j], rat_mul(C, w.yc[j], f));
    for (auto& r : out.wc) rat_compress(C, r);
    return out;
}

// ---------------------------------------------------------------------------
// reduction

namespace {

// per-component elimination state, prescaled by p^delta so that every
// recurrence division can be checked exact
struct RedEnv {
    FiberContext& C;
    u64 nN;  // n/N
    u64 am1i;
    u64 ai;
    V po, z0, o1, aa;
    PV qq;

    RedEnv(FiberContext& c, i32 n)
        : C(c),
          nN(c.mul(c.from_i64(n), c.inv_unit(c.from_i64(c.N)))),
          am1i(c.inv_unit(c.sub(c.alpha, 1))),
          ai(c.inv_unit(c.alpha)) {}

    // x / d for an integer d, p-part checked exact
    u64 du(u64 x, i64 d) {
        u64 dd = C.from_i64(d);
        i32 v = C.vp(dd);
        u64 unit = C.inv_unit(C.divexact_p(dd, v));
        return C.divexact_p(C.mul(x, unit), v);
    }

    // each ident* adds sc times the stated partial-fraction identity
    void identA(size_t m, u64 sc) {  // x^-m (1-x)^-1
        if (!sc) return;
        for (size_t j = 1; j <= m; ++j) add_at(C, z0, j - 1, sc);
        add_at(C, o1, 0, sc);
    }
    void identB(size_t m, u64 sc) {  // x^-m (1-alpha x)^-1
        if (!sc) return;
        u64 ap = 1;
        for (size_t j = m; j >= 1; --j) {
            add_at(C, z0, j - 1, C.mul(sc, ap));
            ap = C.mul(ap, C.alpha);
            if (j == 1) break;
        }
        add_at(C, aa, 0, C.mul(sc, ap));
    }
    void identC(size_t m, u64 sc) {  // (1-x)^-m x^-1
        if (!sc) return;
        add_at(C, z0, 0, sc);
        for (size_t j = 1; j <= m; ++j) add_at(C, o1, j - 1, sc);
    }
    void identD(size_t m, u64 sc) {  // (1-x)^-m (1-alpha x)^-1
        if (!sc) return;
        u64 omai = C.neg(am1i);                   // 1/(1-alpha)
        u64 ratio = C.neg(C.mul(C.alpha, omai));  // -alpha/(1-alpha)
        u64 cur = omai;
        std::vector<u64> betas(m);
        for (size_t s = 0; s < m; ++s) { betas[s] = cur; cur = C.mul(cur, ratio); }
        for (size_t j = 1; j <= m; ++j) add_at(C, o1, j - 1, C.mul(sc, betas[m - j]));
        u64 tail = 1;
        for (size_t s = 0; s < m; ++s) tail = C.mul(tail, ratio);
        add_at(C, aa, 0, C.mul(sc, tail));
    }
    void identE(size_t m, u64 sc) {  // (1-alpha x)^-m x^-1
        if (!sc) return;
        add_at(C, z0, 0, sc);
        for (size_t j = 1; j <= m; ++j) add_at(C, aa, j - 1, C.mul(sc, C.alpha));
    }
    void identF(size_t m, u64 sc) {  // (1-alpha x)^-m (1-x)^-1
        if (!sc) return;
        u64 base = C.mul(C.alpha, am1i);
        u64 ratio = C.neg(am1i);
        u64 cur = base;
        std::vector<u64> gam(m);
        for (size_t s = 0; s < m; ++s) { gam[s] = cur; cur = C.mul(cur, ratio); }
        for (size_t j = 1; j <= m; ++j) add_at(C, aa, j - 1, C.mul(sc, gam[m - j]));
        u64 tail = 1;
        for (size_t s = 0; s < m; ++s) tail = C.mul(tail, ratio);
        add_at(C, o1, 0, C.mul(sc, tail));
    }
    void identG(size_t t, u64 sc) {  // x^t (1-x)^-1
        if (!sc) return;
        for (size_t i = 0; i < t; ++i) add_at(C, po, i, C.neg(sc));
        add_at(C, o1, 0, sc);
    }
    void identH(size_t t, u64 sc) {  // x^t (1-alpha x)^-1
        if (!sc) return;
        u64 aip = 1;
        for (size_t i = 1; i <= t; ++i) {
            aip = C.mul(aip, ai);
            add_at(C, po, t - i, C.neg(C.mul(sc, aip)));
        }
        add_at(C, aa, 0, C.mul(sc, aip));
    }
    void identI(size_t m, u64 sc) {  // x^-1 q^-m
        if (!sc) return;
        add_at(C, z0, 0, sc);
        for (size_t j = 1; j <= m; ++j)
            addq_at(C, qq, j - 1, C.mul(sc, C.from_i64(2)), C.neg(C.mul(sc, C.alpha)));
    }
    void identJ(size_t m, u64 sc) {  // (1-x)^-1 q^-m
        if (!sc) return;
        u64 pref = 1;
        for (size_t i = 0; i < m; ++i) pref = C.mul(pref, am1i);
        add_at(C, o1, 0, C.mul(sc, pref));
        u64 am2 = C.sub(C.alpha, C.from_i64(2));
        u64 run = am1i;
        for (size_t j = m; j >= 1; --j) {
            addq_at(C, qq, j - 1, C.mul(sc, C.mul(run, am2)), C.mul(sc, C.mul(run, C.alpha)));
            run = C.mul(run, am1i);
            if (j == 1) break;
        }
    }
    void identK(size_t m, u64 sc) {  // (1-alpha x)^-1 q^-m
        if (!sc) return;
        u64 base = C.mul(C.alpha, am1i);
        u64 pref = 1;
        for (size_t i = 0; i < m; ++i) pref = C.mul(pref, base);
        add_at(C, aa, 0, C.mul(sc, pref));
        u64 run = am1i;
        for (size_t j = m; j >= 1; --j) {
            addq_at(C, qq, j - 1, C.neg(C.mul(sc, run)), C.mul(sc, C.mul(run, C.alpha)));
            run = C.mul(run, base);
            if (j == 1) break;
        }
    }

    std::array<u64, 6> window() const {
        std::array<u64, 6> c{};
        c[0] = z0.empty() ? 0 : z0[0];
        c[1] = o1.empty() ? 0 : o1[0];
        c[2] = aa.empty() ? 0 : aa[0];
        for (size_t i = 0; i < 3 && i < po.size(); ++i) c[3 + i] = po[i];
        return c;
    }
};

} // namespace

RegulatorVector reduce_to_basis(FiberContext& C, const FiberForm& w) {
    if ((i64)w.wc.size() != C.N) throw DomainError("fiber: form has wrong component count");

    const i32 deltas[4] = {4, 6, 8, 10};
    for (i32 di = 0; di < 4; ++di) {
        const i32 delta = deltas[di];
        try {
            const i32 Atol = C.floorv - 3;
            const i32 thr = std::min(C.W - 1, Atol + delta);
            i32 vobs = C.W;
            i32 detv_max = 0;
            RegulatorVector out;
            out.c_omega.resize((size_t)C.N - 1);
            out.c_eta.resize((size_t)C.N - 1);

            for (i32 n = 0; n < C.N; ++n) {
                RedEnv E(C, n);
                const u64 pd = C.R.ppow[(size_t)delta];
                const FiberRat& T = w.wc[(size_t)n];
                auto lifted = [&](const V& v) {
                    V o(v.size());
                    for (size_t i = 0; i < v.size(); ++i) o[i] = C.mul(v[i], pd);
                    return o;
                };
                E.po = lifted(T.poly); E.z0 = lifted(T.p0);
                E.o1 = lifted(T.p1); E.aa = lifted(T.pa);
                E.qq.resize(T.pq.size());
                for (size_t i = 0; i < T.pq.size(); ++i)
                    E.qq[i] = Pair{C.mul(T.pq[i][0], pd), C.mul(T.pq[i][1], pd)};

                // q-levels k >= 2 die against D of (c + e x) q^-(k-1)
                trimq(E.qq);
                while (E.qq.size() >= 2) {
                    size_t k = E.qq.size(), m = k - 1;
                    u64 A = E.qq[k - 1][0], B = E.qq[k - 1][1];
                    if (A || B) {
                        u64 ce = E.du(A, 2 * (i64)m);  // c + e
                        u64 cc = C.mul(E.du(C.neg(C.add(A, B)), 2 * (i64)m), E.am1i);
                        u64 ee = C.sub(ce, cc);
                        // -G' = -e q^-m + m (c + e x) q' q^-(m+1)
                        addq_at(C, E.qq, m - 1, C.neg(ee), 0);
                        {
                            V num = conv(C, V{cc, ee},
                                         V{C.neg(C.from_i64(2)), C.add(C.alpha, C.alpha)});
                            V spill;
                            num_over_q(C, num, (i32)m + 1, E.qq, spill, C.from_i64((i64)m));
                            trimv(spill);
                            if (!spill.empty()) throw ReductionStall("fiber: q-step spill");
                        }
                        if (n) {
                            // +(n/N) (f'/f) (c + e x) q^-m
                            u64 s1 = E.nN;
                            E.identI(m, C.mul(s1, cc));
                            addq_at(C, E.qq, m - 1, C.mul(s1, ee), 0);
                            u64 s2 = C.neg(C.mul(s1, C.from_i64(C.N - 1)));
                            E.identJ(m, C.mul(s2, ce));
                            addq_at(C, E.qq, m - 1, C.neg(C.mul(s2, ee)), 0);
                            u64 s3 = C.neg(C.mul(s1, C.alpha));
                            u64 eal = C.mul(ee, E.ai);
                            E.identK(m, C.mul(s3, C.add(cc, eal)));
                            addq_at(C, E.qq, m - 1, C.neg(C.mul(s3, eal)), 0);
                        }
                        if (E.qq[k - 1][0] || E.qq[k - 1][1])
                            throw ReductionStall("fiber: q-step cancellation failed");
                    }
                    E.qq.pop_back();
                    trimq(E.qq);
                }
                if (!E.qq.empty()) {
                    i32 v = std::min(E.qq[0][0] ? C.vp(E.qq[0][0]) : C.W,
                                     E.qq[0][1] ? C.vp(E.qq[0][1]) : C.W);
                    if (v < thr) throw ResidueError("fiber: residue at the q-disks");
                    if (v < C.W) vobs = std::min(vobs, v - delta);
                    E.qq.clear();
                }

                // x^-k, k >= 2, die against D of gamma x^-(k-1)
                trimv(E.z0);
                while (E.z0.size() >= 2) {
                    size_t k = E.z0.size(), m = k - 1;
                    u64 A = E.z0[k - 1];
                    if (A) {
                        i64 lead = C.N * (i64)m + n;
                        u64 gamma = E.du(C.mul(C.neg(A), C.from_i64(C.N)), lead);
                        u64 topc = C.mul(C.mul(gamma, C.from_i64(lead)),
                                         C.inv_unit(C.from_i64(C.N)));
                        E.z0[k - 1] = C.add(E.z0[k - 1], topc);
                        if (E.z0[k - 1]) throw ReductionStall("fiber: 0-disk cancellation");
                        if (n) {
                            u64 s = C.mul(E.nN, gamma);
                            E.identA(m, C.neg(C.mul(s, C.from_i64(C.N - 1))));
                            E.identB(m, C.neg(C.mul(s, C.alpha)));
                        }
                    }
                    E.z0.pop_back();
                    trimv(E.z0);
                }

                // (1-x)^-k, k >= 2
                trimv(E.o1);
                while (E.o1.size() >= 2) {
                    size_t k = E.o1.size(), m = k - 1;
                    u64 A = E.o1[k - 1];
                    if (A) {
                        i64 lead = C.N * (i64)m + n * (C.N - 1);
                        u64 gamma = E.du(C.mul(A, C.from_i64(C.N)), lead);
                        u64 topc = C.mul(C.mul(gamma, C.from_i64(lead)),
                                         C.inv_unit(C.from_i64(C.N)));
                        E.o1[k - 1] = C.sub(E.o1[k - 1], topc);
                        if (E.o1[k - 1]) throw ReductionStall("fiber: 1-disk cancellation");
                        if (n) {
                            u64 s = C.mul(E.nN, gamma);
                            E.identC(m, s);
                            E.identD(m, C.neg(C.mul(s, C.alpha)));
                        }
                    }
                    E.o1.pop_back();
                    trimv(E.o1);
                }

                // (1-alpha x)^-k, k >= 2
                trimv(E.aa);
                while (E.aa.size() >= 2) {
                    size_t k = E.aa.size(), m = k - 1;
                    u64 A = E.aa[k - 1];
                    if (A) {
                        i64 lead = C.N * (i64)m + n;
                        u64 gamma = C.mul(E.du(C.mul(A, C.from_i64(C.N)), lead), E.ai);
                        u64 topc = C.mul(C.mul(C.mul(gamma, C.alpha), C.from_i64(lead)),
                                         C.inv_unit(C.from_i64(C.N)));
                        E.aa[k - 1] = C.sub(E.aa[k - 1], topc);
                        if (E.aa[k - 1]) throw ReductionStall("fiber: 1/alpha-disk cancellation");
                        if (n) {
                            u64 s = C.mul(E.nN, gamma);
                            E.identE(m, s);
                            E.identF(m, C.neg(C.mul(s, C.from_i64(C.N - 1))));
                        }
                    }
                    E.aa.pop_back();
                    trimv(E.aa);
                }

                // polynomial part down to degree 2 (n >= 1) or nothing (n = 0)
                const size_t dmin = n ? 3 : 0;
                trimv(E.po);
                while (E.po.size() > dmin) {
                    size_t d = E.po.size() - 1, t = d + 1;
                    u64 A = E.po[d];
                    if (A) {
                        i64 lead = C.N * (i64)t - n * (C.N + 1);
                        u64 gamma = E.du(C.mul(A, C.from_i64(C.N)), lead);
                        u64 s = C.mul(E.nN, gamma);
                        add_at(C, E.po, t - 1,
                               C.add(C.neg(C.mul(gamma, C.from_i64((i64)t))), s));
                        E.identG(t, C.neg(C.mul(s, C.from_i64(C.N - 1))));
                        E.identH(t, C.neg(C.mul(s, C.alpha)));
                        if (E.po[d]) throw ReductionStall("fiber: polynomial cancellation");
                    }
                    E.po.pop_back();
                    trimv(E.po);
                }

                if (n == 0) {
                    auto cw = E.window();
                    for (i32 i = 0; i < 6; ++i) {
                        if (!cw[i]) continue;
                        i32 v = C.vp(cw[i]);
                        if (v < thr)
                            throw ResidueError("fiber: residue on the invariant component");
                        if (v < C.W) vobs = std::min(vobs, v - delta);
                    }
                    continue;
                }

                // terminal window: D(x^j) for j = 0..3 plus the two basis shapes
                u64 M[6][6] = {};
                auto setcol = [&](i32 col, const std::array<u64, 6>& v) {
                    for (i32 r = 0; r < 6; ++r) M[r][col] = v[r];
                };
                for (i32 j = 0; j <= 3; ++j) {
                    RedEnv W2(C, n);
                    u64 s = W2.nN;
                    if (j) {
                        add_at(C, W2.po, (size_t)j - 1, C.from_i64(j));
                        add_at(C, W2.po, (size_t)j - 1, C.neg(s));
                    } else {
                        add_at(C, W2.z0, 0, C.neg(s));
                    }
                    W2.identG((size_t)j, C.mul(s, C.from_i64(C.N - 1)));
                    W2.identH((size_t)j, C.mul(s, C.alpha));
                    setcol(j, W2.window());
                }
                {
                    RedEnv W2(C, n);
                    V om{1, C.neg(1)};
                    V sh{1};
                    for (i32 i = 0; i + 1 < n; ++i) sh = conv(C, sh, om);
                    addv(C, W2.po, sh);
                    setcol(4, W2.window());
                }
                {
                    RedEnv W2(C, n);
                    V om{1, C.neg(1)};
                    V m2{0, 1};
                    for (i32 i = 0; i + 1 < n; ++i) m2 = conv(C, m2, om);
                    for (size_t i = 0; i < m2.size(); ++i)
                        if (m2[i]) W2.identH(i, m2[i]);
                    setcol(5, W2.window());
                }
                std::array<u64, 6> b = E.window();

                auto bareiss = [&](const u64 a[6][6]) -> u64 {
                    u64 m2[6][6];
                    for (i32 i = 0; i < 6; ++i)
                        for (i32 j = 0; j < 6; ++j) m2[i][j] = a[i][j];
                    u64 sign = 1, prev = 1;
                    for (i32 k = 0; k < 5; ++k) {
                        i32 best = -1, bv = C.W + 1;
                        for (i32 r = k; r < 6; ++r) {
                            if (!m2[r][k]) continue;
                            i32 v = C.vp(m2[r][k]);
                            if (v < bv) { bv = v; best = r; }
                        }
                        if (best < 0) return 0;
                        if (best != k) {
                            for (i32 j = 0; j < 6; ++j) std::swap(m2[k][j], m2[best][j]);
                            sign = C.neg(sign);
                        }
                        i32 pv = C.vp(prev);
                        u64 punit = C.inv_unit(C.divexact_p(prev, pv));
                        for (i32 i = k + 1; i < 6; ++i)
                            for (i32 j = k + 1; j < 6; ++j) {
                                u64 num = C.sub(C.mul(m2[i][j], m2[k][k]),
                                                C.mul(m2[i][k], m2[k][j]));
                                m2[i][j] = C.divexact_p(C.mul(num, punit), pv);
                            }
                        prev = m2[k][k];
                    }
                    return C.mul(sign, m2[5][5]);
                };
                u64 det = bareiss(M);
                if (!det) throw ReductionStall("fiber: terminal system is singular");
                i32 dv = C.vp(det);
                if (dv > 4) throw ReductionStall("fiber: terminal determinant p-content");
                detv_max = std::max(detv_max, dv);
                u64 dunit = C.inv_unit(C.divexact_p(det, dv));
                std::array<u64, 6> u{};
                for (i32 col = 0; col < 6; ++col) {
                    u64 Mi[6][6];
                    for (i32 i = 0; i < 6; ++i)
                        for (i32 j = 0; j < 6; ++j) Mi[i][j] = (j == col) ? b[i] : M[i][j];
                    u[col] = C.mul(C.divexact_p(bareiss(Mi), dv), dunit);
                }
                for (i32 r = 0; r < 6; ++r) {
                    u64 acc = 0;
                    for (i32 j2 = 0; j2 < 6; ++j2) acc = C.add(acc, C.mul(M[r][j2], u[j2]));
                    u64 diff = C.sub(acc, b[r]);
                    if (diff && C.vp(diff) < thr)
                        throw ReductionStall("fiber: terminal solve residual");
                }

                i32 cert = std::min({C.floorv, vobs, C.W - delta - dv}) - 1;
                auto unscale = [&](u64 x) {
                    if (!x) return PadicScalar::zero(C.R, cert);
                    i32 v = C.vp(x);
                    UnramifiedRing::Elt e{};
                    if (v >= delta) {
                        e[0] = C.divexact_p(x, delta);
                        return PadicScalar(C.R, e, cert);
                    }
                    e[0] = C.divexact_p(x, v);
                    return PadicScalar(C.R, e, cert, delta - v);
                };
                out.c_omega[(size_t)n - 1] = unscale(u[4]);
                out.c_eta[(size_t)n - 1] = unscale(u[5]);
            }

            i32 cert = std::min({C.floorv, vobs, C.W - delta - detv_max}) - 1;
            for (auto& s : out.c_omega) s = s.cap_prec(cert);
            for (auto& s : out.c_eta) s = s.cap_prec(cert);
            return out;
        } catch (const ReductionStall&) {
            if (di == 3) throw;
        } catch (const ResidueError&) {
            if (di == 3) throw;
        }
    }
    throw ReductionStall("fiber: reduction failed at every headroom");
}

RegulatorVector fiber_regulator(FiberContext& C, const FiberSymbol& sym) {
    FiberForm w = syntomic_one_form(C, sym);
    return reduce_to_basis(C, w);
}

} // namespace hg
