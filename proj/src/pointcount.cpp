#include "hg/pointcount.hpp"

#include <cmath>
#include <complex>
#include <map>
#include <numeric>

#include "hg/errors.hpp"
#include "hg/kernels.hpp"

namespace hg {

namespace {

// dense little-endian coefficient vectors over F_p, used only to pick minpoly
std::vector<i64> fp_mulmod(const std::vector<i64>& a, const std::vector<i64>& b,
                           const std::vector<i32>& mp, i64 p) {
    i32 e = (i32)mp.size();
    std::vector<i64> res(2 * e - 1, 0);
    for (i32 i = 0; i < e; ++i)
        if (a[i])
            for (i32 j = 0; j < e; ++j) res[i + j] = (res[i + j] + a[i] * b[j]) % p;
    for (i32 k = 2 * e - 2; k >= e; --k) {
        i64 c = res[k];
        if (c)
            for (i32 i = 0; i < e; ++i)
                res[k - e + i] = ((res[k - e + i] - c * mp[i]) % p + p) % p;
    }
    res.resize(e);
    return res;
}

std::vector<i64> fp_powmod(std::vector<i64> a, u64 k, const std::vector<i32>& mp, i64 p) {
    std::vector<i64> r(mp.size(), 0);
    r[0] = 1;
    while (k) {
        if (k & 1) r = fp_mulmod(r, a, mp, p);
        a = fp_mulmod(a, a, mp, p);
        k >>= 1;
    }
    return r;
}

bool minpoly_irreducible(const std::vector<i32>& mp, i64 p) {
    i32 e = (i32)mp.size();
    std::vector<i64> x(e, 0);
    x[1] = 1;
    std::vector<std::vector<i64>> frob(e + 1);
    std::vector<i64> cur = x;
    for (i32 k = 1; k <= e; ++k) {
        cur = fp_powmod(cur, (u64)p, mp, p);
        frob[k] = cur;
    }
    if (frob[e] != x) return false;
    for (u64 l : prime_factors((u64)e))
        if (frob[e / (i32)l] == x) return false;
    return true;
}

std::vector<i64> poly_divide_exact(std::vector<i64> num, const std::vector<i64>& den) {
    i32 dd = (i32)den.size() - 1;
    i32 dq = (i32)num.size() - 1 - dd;
    std::vector<i64> q(dq + 1, 0);
    for (i32 k = dq; k >= 0; --k) {
        i64 c = num[k + dd];
        q[k] = c;
        if (c)
            for (i32 i = 0; i <= dd; ++i) num[k + i] -= c * den[i];
    }
    return q;
}

const std::vector<i64>& cyclotomic(i32 N) {
    static std::map<i32, std::vector<i64>> cache;
    auto it = cache.find(N);
    if (it != cache.end()) return it->second;
    std::vector<i64> f(N + 1, 0);
    f[0] = -1;
    f[N] = 1;
    for (i32 d = 1; d < N; ++d)
        if (N % d == 0) f = poly_divide_exact(f, cyclotomic(d));
    return cache.emplace(N, std::move(f)).first->second;
}

std::vector<i64> reduce_mod_phi(std::vector<i64> v, i32 N) {
    const auto& phi = cyclotomic(N);
    i32 dp = (i32)phi.size() - 1;
    if ((i32)v.size() < dp) v.resize(dp, 0);
    for (i32 k = (i32)v.size() - 1; k >= dp; --k) {
        i64 c = v[k];
        if (c)
            for (i32 i = 0; i <= dp; ++i) v[k - dp + i] -= c * phi[i];
    }
    v.resize(dp);
    return v;
}

} // namespace

SmallField::SmallField(i64 p_, i32 e_, u32 gen_override) : p(p_), e(e_) {
    if (p < 2 || !is_prime_u64((u64)p)) throw DomainError("field characteristic must be prime");
    if (e < 1 || e > 6) throw DomainError("field degree out of range");
    double sz = 1;
    for (i32 i = 0; i < e; ++i) sz *= (double)p;
    if (sz > 2e6) throw DomainError("field table cap exceeded");
    size = 1;
    for (i32 i = 0; i < e; ++i) size *= (u32)p;

    if (e >= 2) {
        // lex-smallest irreducible: scan packed non-leading coefficients upward
        for (u32 v = 0;; ++v) {
            std::vector<i32> mp(e);
            u32 t = v;
            for (i32 i = 0; i < e; ++i) {
                mp[i] = (i32)(t % (u32)p);
                t /= (u32)p;
            }
            if (minpoly_irreducible(mp, p)) {
                minpoly = mp;
                break;
            }
        }
    }

    auto fac = prime_factors((u64)size - 1);
    auto is_gen = [&](u32 c) {
        for (u64 l : fac)
            if (pow(c, (size - 1) / l) == 1) return false;
        return true;
    };
    for (u32 c = 2; c < size; ++c)
        if (is_gen(c)) {
            g = c;
            break;
        }
    if (gen_override) {
        if (!is_gen(gen_override)) throw DomainError("override is not a generator");
        g = gen_override;
    }

    expt.assign(size - 1, 1);
    dlog.assign(size, 0);
    u32 cur = 1;
    for (u32 k = 1; k < size - 1; ++k) {
        cur = mul(cur, g);
        expt[k] = cur;
        dlog[cur] = (i32)k;
    }
    one_minus.assign(size, 0);
    for (u32 x = 0; x < size; ++x) {
        u32 t = x, out = 0, mult = 1;
        for (i32 i = 0; i < e; ++i) {
            u32 digit = t % (u32)p;
            t /= (u32)p;
            out += (((i == 0 ? 1u : 0u) + (u32)p - digit) % (u32)p) * mult;
            mult *= (u32)p;
        }
        one_minus[x] = out;
    }
}

u32 SmallField::mul(u32 a, u32 b) const {
    if (e == 1) return (u32)((u64)a * b % (u64)p);
    i64 da[6], db[6], acc[11] = {0};
    u32 ta = a, tb = b;
    for (i32 i = 0; i < e; ++i) {
        da[i] = ta % (u32)p;
        ta /= (u32)p;
        db[i] = tb % (u32)p;
        tb /= (u32)p;
    }
    for (i32 i = 0; i < e; ++i)
        if (da[i])
            for (i32 j = 0; j < e; ++j) acc[i + j] += da[i] * db[j];
    for (i32 k = 2 * e - 2; k >= e; --k) {
        i64 c = acc[k] % p;
        if (c)
            for (i32 i = 0; i < e; ++i) acc[k - e + i] -= c * minpoly[i];
    }
    u32 out = 0;
    for (i32 i = e - 1; i >= 0; --i) out = out * (u32)p + (u32)((acc[i] % p + p) % p);
    return out;
}

u32 SmallField::add(u32 a, u32 b) const {
    u32 out = 0, mult = 1;
    for (i32 i = 0; i < e; ++i) {
        out += ((a % (u32)p + b % (u32)p) % (u32)p) * mult;
        a /= (u32)p;
        b /= (u32)p;
        mult *= (u32)p;
    }
    return out;
}

u32 SmallField::sub(u32 a, u32 b) const {
    u32 out = 0, mult = 1;
    for (i32 i = 0; i < e; ++i) {
        out += ((a % (u32)p + (u32)p - b % (u32)p) % (u32)p) * mult;
        a /= (u32)p;
        b /= (u32)p;
        mult *= (u32)p;
    }
    return out;
}

u32 SmallField::mul_t(u32 a, u32 b) const {
    if (a == 0 || b == 0) return 0;
    return expt[((u64)dlog[a] + (u64)dlog[b]) % (size - 1)];
}

u32 SmallField::pow(u32 a, u64 k) const {
    u32 r = 1;
    while (k) {
        if (k & 1) r = mul(r, a);
        a = mul(a, a);
        k >>= 1;
    }
    return r;
}

u32 SmallField::inv(u32 a) const {
    if (a == 0) throw NotInvertible("zero in a finite field");
    return expt[(size - 1 - (u32)dlog[a]) % (size - 1)];
}

u32 SmallField::from_int(i64 v) const {
    return (u32)((v % p + p) % p);
}

CycInt::CycInt(i32 N_, i64 constant) : N(N_), c(cyclotomic(N_).size() - 1, 0) {
    std::vector<i64> v(1, constant);
    c = reduce_mod_phi(std::move(v), N);
}

CycInt CycInt::zeta_pow(i32 N, i64 k) {
    k %= N;
    if (k < 0) k += N;
    std::vector<i64> v(k + 1, 0);
    v[k] = 1;
    CycInt out(N);
    out.c = reduce_mod_phi(std::move(v), N);
    return out;
}

CycInt CycInt::operator+(const CycInt& o) const {
    if (N != o.N) throw DomainError("mixed cyclotomic orders");
    CycInt out(N);
    for (size_t i = 0; i < c.size(); ++i) out.c[i] = c[i] + o.c[i];
    return out;
}

CycInt CycInt::operator-(const CycInt& o) const {
    if (N != o.N) throw DomainError("mixed cyclotomic orders");
    CycInt out(N);
    for (size_t i = 0; i < c.size(); ++i) out.c[i] = c[i] - o.c[i];
    return out;
}

CycInt CycInt::operator*(const CycInt& o) const {
    if (N != o.N) throw DomainError("mixed cyclotomic orders");
    std::vector<i64> v(2 * c.size(), 0);
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i])
            for (size_t j = 0; j < o.c.size(); ++j) v[i + j] += c[i] * o.c[j];
    CycInt out(N);
    out.c = reduce_mod_phi(std::move(v), N);
    return out;
}

CycInt CycInt::scaled(i64 s) const {
    CycInt out = *this;
    for (auto& x : out.c) x *= s;
    return out;
}

CycInt CycInt::conj() const {
    CycInt out(N);
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i]) out = out + zeta_pow(N, -(i64)i).scaled(c[i]);
    return out;
}

bool CycInt::operator==(const CycInt& o) const { return N == o.N && c == o.c; }

bool CycInt::is_zero() const {
    for (i64 x : c)
        if (x) return false;
    return true;
}

bool CycInt::is_rational() const {
    for (size_t i = 1; i < c.size(); ++i)
        if (c[i]) return false;
    return true;
}

i64 CycInt::rational() const {
    if (!is_rational()) throw DomainError("not a rational integer");
    return c[0];
}

bool CycInt::divisible(i64 m) const {
    for (i64 x : c)
        if (x % m) return false;
    return true;
}

CycInt CycInt::divided(i64 m) const {
    if (!divisible(m)) throw DomainError("inexact division");
    CycInt out = *this;
    for (auto& x : out.c) x /= m;
    return out;
}

i64 CycInt::residue_at(i64 w, i64 p) const {
    i64 s = 0, wp = 1;
    for (i64 x : c) {
        s = (s + x % p * wp) % p;
        wp = wp * (w % p) % p;
    }
    return (s % p + p) % p;
}

double CycInt::abs_embedding(i32 k) const {
    std::complex<double> z = std::polar(1.0, 2.0 * M_PI * k / N), s = 0;
    for (size_t i = c.size(); i-- > 0;) s = s * z + (double)c[i];
    return std::abs(s);
}

PadicScalar CycInt::embed(const UnramifiedRing& R, i64 w) const {
    PadicScalar T = teichmuller(R, w);
    PadicScalar out = PadicScalar::zero(R, R.ctx.M);
    PadicScalar tp = PadicScalar::from_int(R, 1);
    for (size_t i = 0; i < c.size(); ++i) {
        out = out + tp * PadicScalar::from_int(R, c[i]);
        tp = tp * T;
    }
    return out;
}

namespace {

i64 validated(i64 p, i64 N, i32 r, i64 lam) {
    if (!is_prime_u64((u64)p)) throw DomainError("p must be prime");
    if (N < 2 || N > 8) throw DomainError("curve exponent out of range");
    if ((p - 1) % N != 0) throw UnsupportedExtension("need N | p-1 for prime-field character values");
    if (r < 1 || r > 3) throw DomainError("Frobenius power out of range");
    double q2 = 1;
    for (i32 i = 0; i < 2 * r; ++i) q2 *= (double)p;
    if (q2 > 2e6) throw DomainError("field table cap exceeded");
    i64 lr = ((lam % p) + p) % p;
    if (lr == 0 || lr == 1) throw DomainError("lambda reduces to 0 or 1");
    return p;
}

void build_histogram(const SmallField& F, i64 N, i64 lam, std::vector<i64>& out) {
    u32 Q = F.size;
    u32 L = F.from_int(lam);
    std::vector<i32> dlogN(Q);
    std::vector<u32> lam_mul(Q);
    for (u32 x = 0; x < Q; ++x) {
        dlogN[x] = (i32)(F.dlog[x] % (i32)N);
        lam_mul[x] = F.mul_t(L, x);
    }
    ClassHistogramInput in{dlogN.data(), F.one_minus.data(), lam_mul.data(),
                           Q,            (i32)N,             (i32)(N - 1),
                           0,            1,                  F.inv(L)};
    out.assign((size_t)N, 0);
    class_histogram(in, out.data());
}

} // namespace

CurveInstance::CurveInstance(i64 p_, i64 N_, i32 r_, i64 lam, u32 gen_override)
    : p(validated(p_, N_, r_, lam)),
      N(N_),
      r(r_),
      q(1),
      lambda_int(((lam % p_) + p_) % p_),
      F1(p_, r_, gen_override),
      F2(p_, 2 * r_) {
    for (i32 i = 0; i < r; ++i) q *= (u64)p;
    u32 z1 = F1.pow(F1.g, (u64)(q - 1) / (u64)N);
    u32 z2 = F2.pow(F2.g, (u64)(F2.size - 1) / (u64)N);
    if (!F1.prime_field(z1) || !F2.prime_field(z2))
        throw MismatchError("character value escaped the prime field");
    w1 = (i32)z1;
    auto order_is_N = [&](i64 w) {
        if (powmod((u64)w, (u64)N, (u64)p) != 1) return false;
        for (u64 l : prime_factors((u64)N))
            if (powmod((u64)w, (u64)N / l, (u64)p) == 1) return false;
        return true;
    };
    if (!order_is_N(w1)) throw MismatchError("character order is not N");
    m2 = -1;
    i64 wp = 1;
    for (i32 m = 0; m < (i32)N; ++m) {
        if (wp == (i64)z2) {
            m2 = m;
            break;
        }
        wp = wp * w1 % p;
    }
    if (m2 < 0 || std::gcd((i64)m2, N) != 1)
        throw MismatchError("character tower inconsistent");
    build_histogram(F1, N, lambda_int, cnt[0]);
    build_histogram(F2, N, lambda_int, cnt[1]);
}

CycInt character_sum(const CurveInstance& cv, i32 n, i32 j) {
    if (n < 1 || n >= cv.N) throw DomainError("component index out of range");
    if (j < 1 || j > 2) throw DomainError("power must be 1 or 2");
    i64 m = (j == 1) ? 1 : cv.m2;
    CycInt s((i32)cv.N);
    for (i32 c = 0; c < (i32)cv.N; ++c)
        s = s + CycInt::zeta_pow((i32)cv.N, (i64)n * m * c).scaled(cv.cnt[j - 1][c]);
    return s;
}

i64 brute_affine_count(const CurveInstance& cv, i32 j) {
    if (j < 1 || j > 2) throw DomainError("power must be 1 or 2");
    const SmallField& F = (j == 1) ? cv.F1 : cv.F2;
    std::vector<i64> ycnt(F.size, 0);
    for (u32 y = 0; y < F.size; ++y) ++ycnt[F.pow(y, (u64)cv.N)];
    u32 L = F.from_int(cv.lambda_int);
    i64 total = 0;
    for (u32 x = 0; x < F.size; ++x) {
        u32 fx = F.mul_t(F.mul_t(x, F.pow(F.one_minus[x], (u64)cv.N - 1)),
                         F.one_minus[F.mul_t(L, x)]);
        total += ycnt[fx];
    }
    return total;
}

namespace {

ComponentCharPoly cp_raw(const CurveInstance& cv, i32 n) {
    ComponentCharPoly out;
    out.n = n;
    CycInt zero((i32)cv.N);
    out.t1 = zero - character_sum(cv, n, 1);
    out.t2 = zero - character_sum(cv, n, 2);
    out.trace = out.t1;
    out.norm = (out.t1 * out.t1 - out.t2).divided(2);
    out.supersingular = out.trace.residue_at(cv.w1, cv.p) == 0;

    // both eigenvalues have complex absolute value sqrt(q): the norm is q
    // times a root of unity and the trace obeys the archimedean bound
    if (!out.norm.divisible((i64)cv.q)) throw CalibrationError("norm is not divisible by q");
    CycInt u = out.norm.divided((i64)cv.q);
    if (!(u * u.conj() == CycInt((i32)cv.N, 1)))
        throw CalibrationError("norm / q is not a root of unity");
    double bound = 2.0 * std::sqrt((double)cv.q) + 1e-6;
    for (i32 k = 1; k < (i32)cv.N; ++k) {
        if (std::gcd((i64)k, cv.N) != 1) continue;
        if (out.trace.abs_embedding(k) > bound)
            throw CalibrationError("trace violates the eigenvalue bound");
    }
    if (out.trace.is_rational() &&
        out.trace.rational() * out.trace.rational() > 4 * (i64)cv.q)
        throw CalibrationError("rational trace violates the eigenvalue bound");
    return out;
}

i64 smooth_from_cp(const CurveInstance& cv, i32 j) {
    CycInt total((i32)cv.N);
    for (i32 n = 1; n < (i32)cv.N; ++n) {
        ComponentCharPoly cp = cp_raw(cv, n);
        total = total + (j == 1 ? cp.t1 : cp.t1 * cp.t1 - cp.norm.scaled(2));
    }
    i64 qj = (i64)cv.q;
    if (j == 2) qj *= (i64)cv.q;
    return qj + 1 - total.rational();
}

// smooth model = affine points + one rational place at infinity; the single
// place over x = 1 replaces the one singular affine point, net zero
void ensure_calibrated(const CurveInstance& cv) {
    for (i32 j = 1; j <= 2; ++j)
        if (smooth_from_cp(cv, j) != brute_affine_count(cv, j) + 1)
            throw CalibrationError("zeta cross-foot failed");
}

} // namespace

ComponentCharPoly component_charpoly(const CurveInstance& cv, i32 n) {
    ComponentCharPoly out = cp_raw(cv, n);
    ensure_calibrated(cv);
    return out;
}

i64 smooth_count_from_charpolys(const CurveInstance& cv, i32 j) {
    if (j < 1 || j > 2) throw DomainError("power must be 1 or 2");
    return smooth_from_cp(cv, j);
}

i64 hyp_trunc_modp(i64 p, i64 N, i32 n, i64 lam) {
    if (!is_prime_u64((u64)p) || N % p == 0) throw DomainError("bad characteristic");
    if (n < 1 || n >= N) throw DomainError("component index out of range");
    auto invp = [&](i64 a) {
        a = ((a % p) + p) % p;
        if (a == 0) throw NotInvertible("division by p");
        return (i64)powmod((u64)a, (u64)(p - 2), (u64)p);
    };
    i64 lr = ((lam % p) + p) % p;
    i64 iN2 = invp(N) * invp(N) % p;
    i64 c = 1, s = 0, lp = 1;
    for (i64 k = 0; k < p; ++k) {
        s = (s + c * lp) % p;
        lp = lp * lr % p;
        if (k + 1 < p) {
            i64 num = (n + k * N) % p * ((N - n + k * N) % p) % p;
            i64 ik = invp(k + 1);
            c = c * num % p * iN2 % p * ik % p * ik % p;
        }
    }
    return s;
}

UnitRootReport verify_unit_root(const CurveInstance& cv, i32 n, const PadicScalar& alpha,
                                i32 r, const SigmaLift& lift, i32 required) {
    if (r != cv.r) throw DomainError("Frobenius power must match the instance");
    const UnramifiedRing& R = *alpha.R;
    if (R.ctx.p != cv.p) throw DomainError("ring characteristic mismatch");
    ComponentCharPoly cp = component_charpoly(cv, n);
    if (cp.supersingular) throw NonOrdinary("component has no unit eigenvalue");
    PadicScalar lam0 = alpha - PadicScalar::from_int(R, cv.lambda_int);
    if (!lam0.is_zero() && lam0.val_lower() < 1)
        throw DomainError("alpha does not reduce to lambda");

    PadicScalar tr = cp.trace.embed(R, cv.w1);
    PadicScalar nm = cp.norm.embed(R, cv.w1);
    if (!tr.is_unit()) throw NonOrdinary("component has no unit eigenvalue");
    PadicScalar u = tr;
    for (i32 i = 0; i < 48; ++i) {
        PadicScalar f = u * u - tr * u + nm;
        if (f.is_zero()) break;
        u = u - f * (u + u - tr).inv();
    }
    if (!(u * u - tr * u + nm).is_zero())
        throw MismatchError("charpoly has no unit root at this precision");

    i32 dprec = 0;
    PadicScalar ud = dwork_unit_root(R, n, alpha, r, lift, &dprec);
    i32 compared = std::min(dprec, R.ctx.M);
    PadicScalar diff = u - ud;
    i32 agreement = diff.is_zero() ? compared : std::min(diff.val_lower(), compared);
    UnitRootReport rep{agreement >= std::min(required, compared), agreement, compared, u, ud};
    if (!rep.match) throw MismatchError("point-count and limit unit roots disagree");
    return rep;
}

} // namespace hg
