#include "hg/padic.hpp"

#include <algorithm>
#include <cassert>
#include <functional>

namespace hg {

bool is_prime_u64(u64 n) {
    if (n < 2) return false;
    for (u64 d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<u64> prime_factors(u64 n) {
    std::vector<u64> fs;
    for (u64 d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            fs.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) fs.push_back(n);
    return fs;
}

PrimeContext::PrimeContext(i64 p_, i64 N_, i32 M_) : p(p_), N(N_), M(M_) {
    if (p < 3 || !is_prime_u64((u64)p)) throw DomainError("p must be an odd prime");
    if (N < 2) throw DomainError("N must be >= 2");
    if ((p - 1) % N != 0) throw DomainError("need p = 1 mod N");
    if (N % p == 0 || (N - 1) % p == 0) throw DomainError("need p prime to N(N-1)");
    if (M < 1) throw DomainError("M must be >= 1");
    u64 cap = 1;
    for (i32 i = 0; i < M; ++i) {
        if (cap > ((u64)1 << 62) / (u64)p) throw DomainError("p^M exceeds 63-bit capacity");
        cap *= (u64)p;
    }
}

namespace {

// ---- fixed-size polynomial arithmetic mod (monic modulus, p^M) ----
// mp[0..d-1] are the low coefficients of the monic degree-d modulus.

using Elt = UnramifiedRing::Elt;

Elt poly_mulmod(const Elt& a, const Elt& b, const u64* mp, i32 d, u64 pM) {
    u64 prod[2 * UnramifiedRing::DMAX - 1] = {};
    for (i32 i = 0; i < d; ++i) {
        if (!a[i]) continue;
        for (i32 j = 0; j < d; ++j) {
            if (!b[j]) continue;
            prod[i + j] = (prod[i + j] + mulmod(a[i], b[j], pM)) % pM;
        }
    }
    for (i32 k = 2 * d - 2; k >= d; --k) {
        u64 c = prod[k];
        if (!c) continue;
        prod[k] = 0;
        for (i32 i = 0; i < d; ++i) {
            u64 t = mulmod(c, mp[i], pM);
            prod[k - d + i] = (prod[k - d + i] + pM - t) % pM;
        }
    }
    Elt out{};
    for (i32 i = 0; i < d; ++i) out[i] = prod[i];
    return out;
}

Elt poly_powmod(Elt a, u64 e, const u64* mp, i32 d, u64 pM) {
    Elt r{};
    r[0] = 1 % pM;
    while (e) {
        if (e & 1) r = poly_mulmod(r, a, mp, d, pM);
        a = poly_mulmod(a, a, mp, d, pM);
        e >>= 1;
    }
    return r;
}

// ---- F_p[x] helpers for modulus selection ----

using Poly = std::vector<u64>; // coeff[i] of x^i, mod p

void trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly poly_mod(Poly a, const Poly& m, u64 p) {
    trim(a);
    while (a.size() >= m.size()) {
        u64 lead = a.back(); // m monic
        size_t shift = a.size() - m.size();
        for (size_t i = 0; i < m.size(); ++i)
            a[i + shift] = (a[i + shift] + p - mulmod(lead, m[i], p)) % p;
        trim(a);
    }
    return a;
}

Poly poly_mul_fp(const Poly& a, const Poly& b, u64 p) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + mulmod(a[i], b[j], p)) % p;
    return c;
}

Poly poly_powmod_fp(Poly base, u64 e, const Poly& m, u64 p) {
    Poly r{1};
    base = poly_mod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = poly_mod(poly_mul_fp(r, base, p), m, p);
        base = poly_mod(poly_mul_fp(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

Poly poly_gcd_fp(Poly a, Poly b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // make b monic
        u64 lb = b.back();
        if (lb != 1) {
            u64 li = powmod(lb, p - 2, p);
            for (auto& c : b) c = mulmod(c, li, p);
        }
        a = poly_mod(std::move(a), b, p);
        std::swap(a, b);
    }
    return a;
}

bool is_irreducible_fp(const Poly& f, u64 p) {
    i32 d = (i32)f.size() - 1;
    u64 q = 1;
    for (i32 i = 0; i < d; ++i) q *= p;
    Poly x{0, 1};
    // x^(p^d) = x mod f
    Poly t = poly_powmod_fp(x, q, f, p);
    trim(t);
    if (!(t.size() == 2 && t[0] == 0 && t[1] == 1)) return false;
    for (u64 l : prime_factors((u64)d)) {
        u64 qe = 1;
        for (i32 i = 0; i < d / (i32)l; ++i) qe *= p;
        Poly s = poly_powmod_fp(x, qe, f, p);
        // gcd(s - x, f) must be constant
        Poly diff = s;
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + p - 1) % p;
        Poly g = poly_gcd_fp(diff, f, p);
        if (g.size() > 1) return false;
    }
    return true;
}

bool is_primitive_fp(const Poly& f, u64 p) {
    i32 d = (i32)f.size() - 1;
    u64 q = 1;
    for (i32 i = 0; i < d; ++i) q *= p;
    Poly x{0, 1};
    for (u64 l : prime_factors(q - 1)) {
        Poly t = poly_powmod_fp(x, (q - 1) / l, f, p);
        trim(t);
        if (t.size() == 1 && t[0] == 1) return false;
    }
    return true;
}

// det(X I - A) over Z/p^M by minor expansion; entries are linear polynomials.
// Returns monic degree-d coefficients c[0..d] with c[d] = 1.
std::vector<u64> charpoly_zpm(const std::vector<std::vector<u64>>& A, i32 d, u64 pM) {
    // polynomial arithmetic with vectors mod pM
    struct P {
        std::vector<u64> c;
    };
    auto pmul = [&](const std::vector<u64>& x, const std::vector<u64>& y) {
        std::vector<u64> z(x.size() + y.size() - 1, 0);
        for (size_t i = 0; i < x.size(); ++i)
            for (size_t j = 0; j < y.size(); ++j)
                z[i + j] = (z[i + j] + mulmod(x[i], y[j], pM)) % pM;
        return z;
    };
    auto padd = [&](std::vector<u64> x, const std::vector<u64>& y, bool neg) {
        if (x.size() < y.size()) x.resize(y.size(), 0);
        for (size_t i = 0; i < y.size(); ++i)
            x[i] = neg ? (x[i] + pM - y[i]) % pM : (x[i] + y[i]) % pM;
        return x;
    };
    // entries of X I - A as degree <= 1 polys
    std::vector<std::vector<std::vector<u64>>> E(d, std::vector<std::vector<u64>>(d));
    for (i32 i = 0; i < d; ++i)
        for (i32 j = 0; j < d; ++j) {
            u64 b = (pM - A[i][j] % pM) % pM;
            if (i == j)
                E[i][j] = {b, 1};
            else
                E[i][j] = {b};
        }
    // recursive minor expansion over row sets
    std::vector<i32> cols(d);
    for (i32 i = 0; i < d; ++i) cols[i] = i;
    std::function<std::vector<u64>(i32, std::vector<i32>&)> det = [&](i32 row, std::vector<i32>& cs) -> std::vector<u64> {
        if (cs.empty()) return {1 % pM};
        std::vector<u64> acc{0};
        for (size_t k = 0; k < cs.size(); ++k) {
            i32 col = cs[k];
            std::vector<i32> rest;
            for (size_t t = 0; t < cs.size(); ++t)
                if (t != k) rest.push_back(cs[t]);
            auto sub = det(row + 1, rest);
            auto term = pmul(E[row][col], sub);
            acc = padd(std::move(acc), term, (k % 2) == 1);
        }
        return acc;
    };
    auto c = det(0, cols);
    c.resize(d + 1, 0);
    return c;
}

} // namespace

UnramifiedRing::UnramifiedRing(const PrimeContext& c, i32 degree) : ctx(c), d(degree) {
    if (d < 1 || d > DMAX) throw UnsupportedExtension("degree must be 1..4");
    ppow.resize(ctx.M + 1);
    ppow[0] = 1;
    for (i32 i = 1; i <= ctx.M; ++i) ppow[i] = ppow[i - 1] * (u64)ctx.p;
    pM = ppow[ctx.M];
    q1_ = 1;
    for (i32 i = 0; i < d; ++i) q1_ *= (u64)ctx.p;
    q1_ -= 1;
    if (d == 1) {
        minpoly[0] = pM - 1; // X - 1, unused
        return;
    }
    build_minpoly_();
    build_sigma_();
}

void UnramifiedRing::build_minpoly_() {
    u64 p = (u64)ctx.p;
    // first monic irreducible primitive polynomial in counter order
    Poly fbar;
    u64 qd = q1_ + 1;
    for (u64 cnt = 1; cnt < qd; ++cnt) {
        Poly f(d + 1, 0);
        f[d] = 1;
        u64 t = cnt;
        for (i32 i = 0; i < d; ++i) {
            f[i] = t % p;
            t /= p;
        }
        if (f[0] == 0) continue;
        if (!is_irreducible_fp(f, p)) continue;
        if (!is_primitive_fp(f, p)) continue;
        fbar = f;
        break;
    }
    if (fbar.empty()) throw UnsupportedExtension("no primitive polynomial found");

    // Teichmuller generator in the naive lift, then its characteristic polynomial.
    u64 mp_lift[DMAX];
    for (i32 i = 0; i < d; ++i) mp_lift[i] = fbar[i] % pM;
    Elt omega{};
    omega[1] = 1; // x
    i32 iters = (ctx.M - 1 + d - 1) / d + 1;
    for (i32 it = 0; it < iters; ++it) omega = poly_powmod(omega, q1_ + 1, mp_lift, d, pM);

    // multiplication-by-omega matrix in basis 1, x, .., x^(d-1)
    std::vector<std::vector<u64>> A(d, std::vector<u64>(d, 0));
    Elt col = omega;
    for (i32 j = 0; j < d; ++j) {
        for (i32 i = 0; i < d; ++i) A[i][j] = col[i];
        if (j + 1 < d) {
            Elt x{};
            x[1] = 1;
            col = poly_mulmod(col, x, mp_lift, d, pM);
        }
    }
    auto cp = charpoly_zpm(A, d, pM);
    // monic by construction
    assert(cp[d] == 1 % pM);
    for (i32 i = 0; i < d; ++i) minpoly[i] = cp[i];
    // reduction mod p must recover fbar (omega = x mod p)
    for (i32 i = 0; i < d; ++i) assert(minpoly[i] % p == fbar[i]);
    // zeta must be a (q-1)-th root of unity in the final ring
    Elt z = gen();
    Elt zq = pow(z, q1_);
    assert(eq(zq, one()));
}

void UnramifiedRing::build_sigma_() {
    u64 pj = 1;
    for (i32 j = 1; j < d; ++j) {
        pj *= (u64)ctx.p;
        Elt zpj = pow(gen(), pj);
        Elt cur = one();
        for (i32 i = 0; i < d; ++i) {
            sigma_tab_[j - 1][i] = cur;
            if (i + 1 < d) cur = mul(cur, zpj);
        }
    }
}

UnramifiedRing::Elt UnramifiedRing::gen() const {
    Elt e{};
    if (d == 1)
        e[0] = 1 % pM;
    else
        e[1] = 1;
    return e;
}

UnramifiedRing::Elt UnramifiedRing::from_int(i64 v) const {
    Elt e{};
    i64 r = v % (i64)pM;
    if (r < 0) r += (i64)pM;
    e[0] = (u64)r;
    return e;
}

UnramifiedRing::Elt UnramifiedRing::add(const Elt& a, const Elt& b) const {
    Elt r{};
    for (i32 i = 0; i < d; ++i) r[i] = (a[i] + b[i]) % pM;
    return r;
}

UnramifiedRing::Elt UnramifiedRing::sub(const Elt& a, const Elt& b) const {
    Elt r{};
    for (i32 i = 0; i < d; ++i) r[i] = (a[i] + pM - b[i]) % pM;
    return r;
}

UnramifiedRing::Elt UnramifiedRing::neg(const Elt& a) const {
    Elt r{};
    for (i32 i = 0; i < d; ++i) r[i] = a[i] ? pM - a[i] : 0;
    return r;
}

UnramifiedRing::Elt UnramifiedRing::mul(const Elt& a, const Elt& b) const {
    if (d == 1) {
        Elt r{};
        r[0] = mulmod(a[0], b[0], pM);
        return r;
    }
    return poly_mulmod(a, b, minpoly.data(), d, pM);
}

UnramifiedRing::Elt UnramifiedRing::mul_small(const Elt& a, u64 s) const {
    Elt r{};
    s %= pM;
    for (i32 i = 0; i < d; ++i) r[i] = mulmod(a[i], s, pM);
    return r;
}

UnramifiedRing::Elt UnramifiedRing::pow(Elt a, u64 e) const {
    Elt r = one();
    while (e) {
        if (e & 1) r = mul(r, a);
        a = mul(a, a);
        e >>= 1;
    }
    return r;
}

bool UnramifiedRing::is_zero(const Elt& a) const {
    for (i32 i = 0; i < d; ++i)
        if (a[i]) return false;
    return true;
}

bool UnramifiedRing::eq(const Elt& a, const Elt& b) const {
    for (i32 i = 0; i < d; ++i)
        if (a[i] != b[i]) return false;
    return true;
}

i32 UnramifiedRing::val(const Elt& a) const {
    i32 v = ctx.M;
    u64 p = (u64)ctx.p;
    for (i32 i = 0; i < d; ++i) {
        if (!a[i]) continue;
        u64 x = a[i];
        i32 vi = 0;
        while (x % p == 0) {
            x /= p;
            ++vi;
        }
        v = std::min(v, vi);
    }
    return v;
}

UnramifiedRing::Elt UnramifiedRing::shift_down(const Elt& a, i32 k) const {
    if (k == 0) return a;
    Elt r{};
    u64 pk = ppow[k];
    for (i32 i = 0; i < d; ++i) {
        assert(a[i] % pk == 0);
        r[i] = a[i] / pk;
    }
    return r;
}

UnramifiedRing::Elt UnramifiedRing::shift_up(const Elt& a, i32 k) const {
    if (k >= ctx.M) return Elt{};
    Elt r{};
    u64 pk = ppow[k];
    for (i32 i = 0; i < d; ++i) r[i] = mulmod(a[i], pk, pM);
    return r;
}

UnramifiedRing::Elt UnramifiedRing::reduce_mod(const Elt& a, i32 k) const {
    k = std::max(0, std::min(k, ctx.M));
    Elt r{};
    u64 pk = ppow[k];
    for (i32 i = 0; i < d; ++i) r[i] = a[i] % pk;
    return r;
}

UnramifiedRing::Elt UnramifiedRing::inv(const Elt& a) const {
    if (val(a) != 0) throw NotInvertible("ring inverse of a non-unit");
    // inverse mod p by F_q power, then Newton lifting
    Elt x = reduce_mod(a, 1);
    Elt xi;
    if (d == 1) {
        xi = Elt{};
        xi[0] = powmod(x[0], (u64)ctx.p - 2, (u64)ctx.p);
    } else {
        // power q-2 with arithmetic mod p inside the p^M representation
        Elt r = one();
        Elt b = x;
        u64 e = q1_ - 1;
        while (e) {
            if (e & 1) r = reduce_mod(mul(r, b), 1);
            b = reduce_mod(mul(b, b), 1);
            e >>= 1;
        }
        xi = r;
    }
    // Newton: xi <- xi (2 - a xi), digits double each step
    for (i32 good = 1; good < ctx.M; good *= 2) {
        Elt t = mul(a, xi);
        Elt two_minus = sub(from_int(2), t);
        xi = mul(xi, two_minus);
    }
    assert(eq(mul(a, xi), one()));
    return xi;
}

UnramifiedRing::Elt UnramifiedRing::sigma(const Elt& a, i32 j) const {
    if (d == 1) return a;
    j = ((j % d) + d) % d;
    if (j == 0) return a;
    Elt r{};
    for (i32 i = 0; i < d; ++i) {
        if (!a[i]) continue;
        r = add(r, mul_small(sigma_tab_[j - 1][i], a[i]));
    }
    return r;
}

UnramifiedRing::Elt UnramifiedRing::teichmuller_elt(const Elt& a) const {
    if (val(a) != 0) throw DomainError("teichmuller of a non-unit");
    Elt t = a;
    i32 iters = (ctx.M - 1 + d - 1) / d + 1;
    for (i32 it = 0; it < iters; ++it) t = pow(t, q1_ + 1);
    assert(eq(pow(t, q1_ + 1), t));
    return t;
}

// ---- PadicScalar ----

PadicScalar::PadicScalar(const UnramifiedRing& ring, UnramifiedRing::Elt v, i32 prec_, i32 neg_)
    : R(&ring), c(v), prec(prec_), neg(neg_) {
    canon_();
}

void PadicScalar::canon_() {
    assert(neg >= 0);
    if (prec + neg > M()) prec = M() - neg;
    i32 known = prec + neg;
    c = R->reduce_mod(c, known); // clamps to [0, M]
    if (known <= 0) c = R->zero();
    if (!R->is_zero(c)) {
        i32 v = R->val(c);
        i32 s = std::min(v, neg);
        if (s > 0) {
            c = R->shift_down(c, s);
            neg -= s;
        }
    } else {
        neg = 0;
    }
}

PadicScalar PadicScalar::zero(const UnramifiedRing& ring) {
    return PadicScalar(ring, ring.zero(), ring.ctx.M, 0);
}

PadicScalar PadicScalar::zero(const UnramifiedRing& ring, i32 prec) {
    return PadicScalar(ring, ring.zero(), prec, 0);
}

PadicScalar PadicScalar::from_int(const UnramifiedRing& ring, i64 v) {
    return PadicScalar(ring, ring.from_int(v), ring.ctx.M, 0);
}

PadicScalar PadicScalar::from_ratio(const UnramifiedRing& ring, i64 num, i64 den) {
    if (den == 0) throw DomainError("zero denominator");
    if (num == 0) return zero(ring);
    i64 p = ring.ctx.p;
    i32 vn = 0, vd = 0;
    while (num % p == 0) {
        num /= p;
        ++vn;
    }
    while (den % p == 0) {
        den /= p;
        ++vd;
    }
    auto u = ring.mul(ring.from_int(num), ring.inv(ring.from_int(den)));
    i32 shift = vn - vd;
    if (shift >= 0) return PadicScalar(ring, ring.shift_up(u, shift), ring.ctx.M, 0);
    return PadicScalar(ring, u, ring.ctx.M + shift, -shift);
}

bool PadicScalar::is_zero() const { return R->is_zero(c); }

i32 PadicScalar::val_lower() const {
    if (R->is_zero(c)) return prec;
    return R->val(c) - neg;
}

i32 PadicScalar::val_exact() const {
    if (R->is_zero(c)) throw NotInvertible("valuation undetermined (zero to precision)");
    return R->val(c) - neg;
}

bool PadicScalar::is_unit() const { return !is_zero() && val_exact() == 0; }

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
    assert(R == o.R);
    i32 g = std::max(neg, o.neg);
    auto ca = R->shift_up(c, g - neg);
    auto cb = R->shift_up(o.c, g - o.neg);
    return PadicScalar(*R, R->add(ca, cb), std::min(prec, o.prec), g);
}

PadicScalar PadicScalar::operator-(const PadicScalar& o) const {
    assert(R == o.R);
    i32 g = std::max(neg, o.neg);
    auto ca = R->shift_up(c, g - neg);
    auto cb = R->shift_up(o.c, g - o.neg);
    return PadicScalar(*R, R->sub(ca, cb), std::min(prec, o.prec), g);
}

PadicScalar PadicScalar::operator-() const { return PadicScalar(*R, R->neg(c), prec, neg); }

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
    assert(R == o.R);
    i32 vla = val_lower(), vlb = o.val_lower();
    i32 rel = std::min(prec - vla, o.prec - vlb);
    return PadicScalar(*R, R->mul(c, o.c), vla + vlb + rel, neg + o.neg);
}

PadicScalar PadicScalar::inv() const {
    i32 v = val_exact() + neg; // valuation of c
    auto u = R->shift_down(c, v);
    auto ui = R->inv(u);
    i32 valr = -(v - neg);
    i32 precr = valr + rel_prec();
    if (valr >= 0) return PadicScalar(*R, R->shift_up(ui, valr), precr, 0);
    return PadicScalar(*R, ui, precr, -valr);
}

PadicScalar PadicScalar::operator/(const PadicScalar& o) const { return *this * o.inv(); }

PadicScalar PadicScalar::pow(i64 e) const {
    if (e < 0) return inv().pow(-e);
    PadicScalar r = from_int(*R, 1);
    PadicScalar b = *this;
    u64 ue = (u64)e;
    while (ue) {
        if (ue & 1) r = r * b;
        b = b * b;
        ue >>= 1;
    }
    return r;
}

PadicScalar PadicScalar::sigma(i32 j) const { return PadicScalar(*R, R->sigma(c, j), prec, neg); }

PadicScalar PadicScalar::mul_ppow(i32 k) const {
    if (k >= 0) {
        i32 t = std::min(neg, k);
        return PadicScalar(*R, R->shift_up(c, k - t), prec + k, neg - t);
    }
    return PadicScalar(*R, c, prec + k, neg - k);
}

PadicScalar PadicScalar::cap_prec(i32 m) const { return PadicScalar(*R, c, std::min(prec, m), neg); }

PadicScalar PadicScalar::scaled_int(i64 s) const { return *this * from_int(*R, s); }

UnramifiedRing::Elt PadicScalar::raw_elt() const {
    if (neg != 0) throw DomainError("value has a p-pole, no integral representative");
    return c;
}

PadicScalar PadicScalar::lift_to(const UnramifiedRing& ring) const {
    if (R == &ring) return *this;
    if (R->d != 1) throw DomainError("lift_to requires a prime-field source");
    if (R->ctx.p != ring.ctx.p) throw DomainError("lift_to across different p");
    UnramifiedRing::Elt e{};
    e[0] = c[0] % ring.pM;
    return PadicScalar(ring, e, std::min(prec, ring.ctx.M - neg), neg);
}

PadicScalar PadicScalar::retract_to_prime(const UnramifiedRing& ring) const {
    if (ring.d != 1 || ring.ctx.p != R->ctx.p) throw DomainError("bad retract target");
    for (i32 i = 1; i < R->d; ++i)
        if (c[i] != 0) throw DomainError("retract of a non-rational value");
    UnramifiedRing::Elt e{};
    e[0] = c[0] % ring.pM;
    return PadicScalar(ring, e, std::min(prec, ring.ctx.M - neg), neg);
}

bool PadicScalar::congruent(const PadicScalar& o, i32 m) const {
    PadicScalar diff = *this - o;
    return diff.val_lower() >= m;
}

std::string PadicScalar::str() const {
    std::string s;
    if (neg) s += "p^-" + std::to_string(neg) + "*";
    s += "(";
    for (i32 i = 0; i < R->d; ++i) {
        if (i) s += " + ";
        s += std::to_string(c[i]);
        if (i == 1) s += "*z";
        if (i > 1) s += "*z^" + std::to_string(i);
    }
    s += ") + O(p^" + std::to_string(prec) + ")";
    return s;
}

// ---- named operations ----

PadicScalar teichmuller(const UnramifiedRing& R, i64 cres) {
    return teichmuller(R, R.from_int(cres));
}

PadicScalar teichmuller(const UnramifiedRing& R, const UnramifiedRing::Elt& cres) {
    if (R.val(cres) != 0) throw DomainError("teichmuller of zero residue");
    return PadicScalar(R, R.teichmuller_elt(cres), R.ctx.M, 0);
}

std::vector<PadicScalar> roots_of_unity_in(const UnramifiedRing& R, i64 order) {
    if (order < 1 || R.q1() % (u64)order != 0) throw UnsupportedExtension("order does not divide q-1");
    u64 q1 = R.q1();
    u64 p = (u64)R.ctx.p;
    // smallest generator of F_q^* in counter order
    UnramifiedRing::Elt g{};
    bool found = false;
    for (u64 cnt = 1; cnt <= q1 && !found; ++cnt) {
        UnramifiedRing::Elt cand{};
        u64 t = cnt;
        for (i32 i = 0; i < R.d; ++i) {
            cand[i] = t % p;
            t /= p;
        }
        bool ok = true;
        for (u64 l : prime_factors(q1)) {
            auto e = R.reduce_mod(R.pow(cand, q1 / l), 1);
            if (R.eq(e, R.reduce_mod(R.one(), 1))) {
                ok = false;
                break;
            }
        }
        if (ok) {
            g = cand;
            found = true;
        }
    }
    if (!found) throw UnsupportedExtension("no generator found");
    auto omega = R.teichmuller_elt(g);
    auto zeta = R.pow(omega, q1 / (u64)order);
    std::vector<PadicScalar> roots;
    roots.reserve(order);
    auto cur = R.one();
    for (i64 i = 0; i < order; ++i) {
        roots.emplace_back(R, cur, R.ctx.M, 0);
        cur = R.mul(cur, zeta);
    }
    return roots;
}

RootsOfUnity roots_of_unity(i64 p, i32 M, i64 order) {
    if (order < 1) throw DomainError("order must be positive");
    i32 dmin = 0;
    u64 qd = 1;
    for (i32 d = 1; d <= UnramifiedRing::DMAX; ++d) {
        qd *= (u64)p;
        if ((qd - 1) % (u64)order == 0) {
            dmin = d;
            break;
        }
    }
    if (!dmin) throw UnsupportedExtension("order requires degree > 4");
    RootsOfUnity out;
    out.ring = std::make_unique<UnramifiedRing>(PrimeContext(p, 2, M), dmin);
    out.roots = roots_of_unity_in(*out.ring, order);
    return out;
}

PadicScalar log_1unit(const PadicScalar& beta) {
    const UnramifiedRing& R = *beta.R;
    PadicScalar one = PadicScalar::from_int(R, 1);
    PadicScalar diff = one - beta;
    if (beta.neg != 0 || diff.val_lower() < 1) throw DomainError("log of a non-1-unit");
    // beta = 1 - p z with z integral; log(beta) = -sum (p z)^k / k.
    // Powers of z stay at valuation 0 so the capacity clamp cannot eat
    // relative precision; the exact p^k scale is applied per term.
    PadicScalar z = diff.mul_ppow(-1);
    i64 p = R.ctx.p;
    i32 kmax = 1;
    {
        auto vp = [&](i64 k) {
            i32 v = 0;
            while (k % p == 0) {
                k /= p;
                ++v;
            }
            return v;
        };
        while (kmax - vp(kmax) < R.ctx.M + 2) ++kmax;
    }
    PadicScalar sum = PadicScalar::zero(R);
    PadicScalar pw = one;
    for (i32 k = 1; k <= kmax; ++k) {
        pw = pw * z;
        sum = sum + (pw / PadicScalar::from_int(R, k)).mul_ppow(k);
    }
    return -sum;
}

PadicScalar log_unit(const PadicScalar& alpha, i32 sigma_power) {
    if (!alpha.is_unit()) throw DomainError("log_unit of a non-unit");
    if (sigma_power < 1) throw DomainError("sigma power must be >= 1");
    const UnramifiedRing& R = *alpha.R;
    u64 pj = 1;
    for (i32 i = 0; i < sigma_power; ++i) pj *= (u64)R.ctx.p;
    PadicScalar beta = alpha.pow((i64)pj) / alpha.sigma(sigma_power);
    return log_1unit(beta).mul_ppow(-sigma_power);
}

PadicScalar exp_small(const PadicScalar& x) {
    if (x.val_lower() < 1) throw DomainError("exp requires valuation >= 1");
    const UnramifiedRing& R = *x.R;
    PadicScalar one = PadicScalar::from_int(R, 1);
    if (x.is_zero()) return one.cap_prec(x.prec);
    i32 s = x.val_exact();
    PadicScalar y = x.mul_ppow(-s); // unit part
    PadicScalar term = one;         // y^k / k!
    PadicScalar sum = one;
    // val(x^k/k!) >= k(p-2)/(p-1); 6M+8 terms push the tail past capacity
    for (i32 k = 1; k <= 6 * R.ctx.M + 8; ++k) {
        term = term * y / PadicScalar::from_int(R, k);
        sum = sum + term.mul_ppow(s * k);
    }
    return sum.cap_prec(x.prec);
}

} // namespace hg
