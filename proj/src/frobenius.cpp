#include "hg/frobenius.hpp"

#include <sstream>
#include <utility>

#include "hg/errors.hpp"

namespace hg {

namespace {

TruncSeries const_series(const UnramifiedRing& R, const PadicScalar& c) {
    TruncSeries f(R, 0, 1, true);
    f.set(0, c);
    return f;
}

TruncSeries lambda_minus_sq(const UnramifiedRing& R) {
    TruncSeries f(R, 1, 3, true);
    f.set(1, PadicScalar::from_int(R, 1));
    f.set(2, PadicScalar::from_int(R, -1));
    return f;
}

// lambda^sigma - (lambda^sigma)^2 = a l^p - a^2 l^{2p}, window padded to L
TruncSeries sigma_lm(const SigmaLift& lift, i32 L) {
    const UnramifiedRing& R = *lift.a.R;
    i32 p = (i32)R.ctx.p;
    TruncSeries f(R, p, 2 * p + 1, true);
    f.set(p, lift.a);
    f.set(2 * p, PadicScalar::from_int(R, -1) * lift.a * lift.a);
    return L > 2 * p + 1 ? f.truncated(L) : f;
}

i32 vp_of(i64 k, i64 p) {
    i32 v = 0;
    while (k % p == 0) {
        k /= p;
        ++v;
    }
    return v;
}

} // namespace

Mat2 Mat2::zero(const UnramifiedRing& R) {
    TruncSeries z(R, 0, 1, true);
    return Mat2(z, z, z, z);
}

Mat2 Mat2::operator+(const Mat2& o) const {
    return Mat2(a + o.a, b + o.b, c + o.c, d + o.d);
}

Mat2 Mat2::operator-(const Mat2& o) const {
    return Mat2(a - o.a, b - o.b, c - o.c, d - o.d);
}

Mat2 Mat2::operator*(const Mat2& o) const {
    return Mat2(a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d);
}

Mat2 Mat2::scaled(const PadicScalar& s) const {
    return Mat2(a.scaled(s), b.scaled(s), c.scaled(s), d.scaled(s));
}

Mat2 Mat2::derivative() const {
    return Mat2(a.derivative(), b.derivative(), c.derivative(), d.derivative());
}

Mat2 Mat2::right_scaled(const TruncSeries& f) const {
    return Mat2(a * f, b * f, c * f, d * f);
}

TruncSeries Mat2::det() const { return a * d - b * c; }

Mat2 Mat2::inverse() const {
    TruncSeries di = det().inverse();
    PadicScalar m1 = PadicScalar::from_int(*a.R, -1);
    return Mat2(d * di, (b * di).scaled(m1), (c * di).scaled(m1), a * di);
}

bool Mat2::congruent(const Mat2& o, i32 m, i32 upto) const {
    return a.congruent(o.a, m, upto) && b.congruent(o.b, m, upto) &&
           c.congruent(o.c, m, upto) && d.congruent(o.d, m, upto);
}

bool Mat2::zero_mod(i32 m, i32 upto) const {
    return a.zero_mod(m, upto) && b.zero_mod(m, upto) && c.zero_mod(m, upto) &&
           d.zero_mod(m, upto);
}

KappaResult kappa_constants(const UnramifiedRing& R, i32 n) {
    i64 N = R.ctx.N;
    if (n < 1 || n >= N) throw DomainError("eigen index out of range");
    std::vector<PadicScalar> mu = roots_of_unity_in(R, N);
    auto at = [&](i64 e) -> const PadicScalar& { return mu[(size_t)(((e % N) + N) % N)]; };
    PadicScalar one = PadicScalar::from_int(R, 1);
    PadicScalar two = PadicScalar::from_int(R, 2);
    PadicScalar half = PadicScalar::from_ratio(R, 1, 2);

    PadicScalar A = two * log_unit(PadicScalar::from_int(R, N));
    for (i64 j = 1; j < N; ++j) {
        PadicScalar lg = log_unit((one - at(j)) * (one - at(-j)));
        A = A - half * (at((i64)n * j) + at(-(i64)n * j)) * lg;
    }
    PadicScalar B = PadicScalar::zero(R);
    for (i64 j = 1; j < N; ++j)
        B = B + two * (one - at(-(i64)n * j)) * log_unit(one - at(j));

    PadicScalar diff = A - B;
    if (!diff.is_zero() || diff.val_lower() < R.ctx.M - 2)
        throw MismatchError("the two closed forms of the period constant disagree");

    std::ostringstream shape;
    shape << "2 log " << N << " - (1/2) sum over e with e^" << N << "=1, e!=1 of (e^" << n
          << " + e^-" << n << ") log((1-e)(1-e^-1))";
    return KappaResult{shape.str(), B};
}

TruncSeries tau_tilde(const HGSeries& F, i32 L) {
    const UnramifiedRing& R = *F.series.R;
    if (F.series.L < L) throw DomainError("series window too short for the primitive");
    TruncSeries Ft = F.series.truncated(L);
    TruncSeries g =
        TruncSeries::one(R, L) - geometric_series(R, L) * (Ft * Ft).inverse();
    if (!g.coeff(0).is_zero()) throw NotIntegrable("integrand has a pole at lambda = 0");
    TruncSeries tt = g.shifted(-1).primitive(PadicScalar::zero(R));
    for (i32 i = 1; i < tt.L; ++i)
        if (tt.coeff(i).val_lower() < -vp_of(i, R.ctx.p)) {
            std::ostringstream os;
            os << "tau coefficient " << i << " exceeds its pole budget v_p(i)";
            throw MismatchError(os.str());
        }
    return tt;
}

PadicScalar k_weight(const UnramifiedRing& R, i32 n, i32 i) {
    i64 N = R.ctx.N;
    PadicScalar K = PadicScalar::zero(R);
    for (i64 k = 1; k <= i; ++k)
        K = K + PadicScalar::from_ratio(R, 2, k) - PadicScalar::from_ratio(R, N, k * N - n) -
            PadicScalar::from_ratio(R, N, (k - 1) * N + n);
    return K;
}

TruncSeries tau_series_via_K(const HGSeries& F, i32 L) {
    const UnramifiedRing& R = *F.series.R;
    if (F.series.L < L) throw DomainError("series window too short");
    i64 N = R.ctx.N;
    i32 n = F.n;
    TruncSeries br(R, 0, L, false);
    PadicScalar K = PadicScalar::zero(R);
    for (i64 i = 1; i < L; ++i) {
        K = K + PadicScalar::from_ratio(R, 2, i) - PadicScalar::from_ratio(R, N, i * N - n) -
            PadicScalar::from_ratio(R, N, (i - 1) * N + n);
        br.set((i32)i, K * F.series.coeff((i32)i));
    }
    return br * F.series.truncated(L).inverse();
}

TruncSeries tau_sigma(const HGSeries& F, const SigmaLift& lift, const PadicScalar& kappa_p,
                      i32 L) {
    const UnramifiedRing& R = *F.series.R;
    TruncSeries tt = tau_tilde(F, L);
    TruncSeries out = tt - sigma_substitute(tt, lift, L).scaled(
                               PadicScalar::from_ratio(R, 1, R.ctx.p));
    out.set(0, out.coeff(0) + kappa_p + log_1unit(lift.a).mul_ppow(-1));
    return out;
}

Mat2 gauss_manin_matrix(const UnramifiedRing& R, i32 n, i32 L) {
    i64 N = R.ctx.N;
    if (n < 1 || n >= N) throw DomainError("eigen index out of range");
    TruncSeries lminv = lambda_minus_sq(R).truncated(L + 2).inverse(); // [-1, L)
    TruncSeries two_l_m1(R, 0, 2, true);
    two_l_m1.set(0, PadicScalar::from_int(R, -1));
    two_l_m1.set(1, PadicScalar::from_int(R, 2));
    TruncSeries z(R, 0, 1, true);
    return Mat2(z, lminv.scaled(PadicScalar::from_ratio(R, N - n, N)),
                const_series(R, PadicScalar::from_ratio(R, n, N)), two_l_m1 * lminv);
}

Mat2 gauss_manin_matrix_tilde(const HGSeries& F, i32 L) {
    const UnramifiedRing& R = *F.series.R;
    TruncSeries lminv = lambda_minus_sq(R).truncated(L + 2).inverse();
    TruncSeries Ft = F.series.truncated(L);
    TruncSeries z(R, 0, 1, true);
    TruncSeries c =
        (lminv * (Ft * Ft).inverse()).scaled(PadicScalar::from_int(R, -1));
    return Mat2(z, z, c, z);
}

Mat2 basis_change_matrix(const HGSeries& F, i32 L) {
    const UnramifiedRing& R = *F.series.R;
    i64 N = R.ctx.N;
    TruncSeries lm = lambda_minus_sq(R);
    TruncSeries Ft = F.series.truncated(L);
    TruncSeries z(R, 0, 1, true);
    return Mat2(Ft.inverse(), lm * Ft.derivative(), z,
                (lm * Ft).scaled(PadicScalar::from_ratio(R, -F.n, N)));
}

Mat2 EigenComponent::action() const {
    PadicScalar p = PadicScalar::from_int(*fij.a.R, fij.a.R->ctx.p);
    return Mat2(fij.a.scaled(p), fij.b, fij.c.scaled(p), fij.d);
}

TruncSeries det_target(const UnramifiedRing& R, const SigmaLift& lift, i32 L) {
    i32 p = (i32)R.ctx.p;
    return lambda_minus_sq(R) * sigma_lm(lift, L + 2 * p).inverse();
}

EigenComponent build_eigen_component(const UnramifiedRing& R, i32 n, const SigmaLift& lift,
                                     i32 L, i32 det_guard) {
    i64 p = R.ctx.p;
    i64 N = R.ctx.N;
    i32 M = R.ctx.M;
    if ((p - 1) % N != 0) throw DomainError("mu_N does not embed in Z_p");
    i32 Lb = L + (i32)p + 2;

    HGSeries F = build_hg(R, n, Lb);
    i32 sign = (((i64)n * ((p - 1) / N)) % 2 == 0) ? 1 : -1;
    PadicScalar e = PadicScalar::from_int(R, sign);
    KappaResult kap = kappa_constants(R, n);
    TruncSeries tt = tau_tilde(F, Lb);
    TruncSeries tsig = tau_sigma(F, lift, kap.value, Lb);

    TruncSeries Fs = F.series;
    TruncSeries Fd = Fs.derivative();
    TruncSeries Fsig = sigma_substitute(Fs, lift, Lb);
    TruncSeries Fsig_d = sigma_substitute(Fd, lift, Lb); // derivative, then substitute
    TruncSeries Finv = Fs.inverse();
    TruncSeries Fsiginv = Fsig.inverse();
    TruncSeries lm = lambda_minus_sq(R);
    TruncSeries ratio = lm * sigma_lm(lift, Lb + 2 * (i32)p).inverse(); // [1-p, ...)

    TruncSeries F11 = (Fsig * Finv - lm * Fd * Fsig * tsig).scaled(e);
    TruncSeries F21 =
        (lm * Fs * Fsig * tsig).scaled(e * PadicScalar::from_ratio(R, n, N));
    PadicScalar Nn = PadicScalar::from_ratio(R, N, n);
    TruncSeries pFF = (Fsig_d * Fsiginv).scaled(PadicScalar::from_int(R, p));
    TruncSeries F12 = (pFF * F11 - (ratio * Fd * Fsiginv).scaled(e)).scaled(Nn);
    TruncSeries F22 =
        (pFF * F21 + (ratio * Fs * Fsiginv).scaled(e * PadicScalar::from_ratio(R, n, N)))
            .scaled(Nn);

    // independent assembly through the basis change
    Mat2 B = basis_change_matrix(F, Lb);
    Mat2 Phi_t(const_series(R, e * PadicScalar::from_int(R, p)), TruncSeries(R, 0, 1, true),
               tsig.scaled(e * PadicScalar::from_int(R, -p)), const_series(R, e));
    TruncSeries qs = sigma_lm(lift, Lb + 2 * (i32)p);
    TruncSeries z(R, 0, 1, true);
    Mat2 Bs(Fsiginv, qs * Fsig_d, z, (qs * Fsig).scaled(PadicScalar::from_ratio(R, -n, N)));
    Mat2 via_basis = B * Phi_t * Bs.inverse();

    PadicScalar pp = PadicScalar::from_int(R, p);
    Mat2 act1(F11.scaled(pp), F12, F21.scaled(pp), F22);
    if (!act1.congruent(via_basis, M - det_guard, L))
        throw MismatchError("entry formulas disagree with the basis-change assembly");

    TruncSeries det_res = (F11 * F22 - F12 * F21) - ratio;
    if (!det_res.zero_mod(M - det_guard, L))
        throw MismatchError("determinant identity failed");

    Mat2 fij(F11.truncated(L), F12.truncated(L), F21.truncated(L), F22.truncated(L));
    auto check_integral = [&](const TruncSeries& f, const char* which) {
        if (f.min_val_lower(f.lo, f.L) < 0) {
            std::ostringstream os;
            os << "matrix entry " << which << " has a coefficient outside W";
            throw MismatchError(os.str());
        }
    };
    check_integral(fij.a, "11");
    check_integral(fij.b, "12");
    check_integral(fij.c, "21");
    check_integral(fij.d, "22");

    return EigenComponent{n, sign, std::move(F), kap.value, std::move(tt),
                          std::move(tsig), std::move(fij), lift};
}

Mat2 horizontality_residual(const EigenComponent& E, i32 L) {
    const UnramifiedRing& R = *E.fij.a.R;
    i64 p = R.ctx.p;
    i64 N = R.ctx.N;
    Mat2 Fm = E.action();
    Mat2 C = gauss_manin_matrix(R, E.n, L);
    TruncSeries qsinv = sigma_lm(E.lift, L + 2 * (i32)p).inverse(); // [-p, ...)
    TruncSeries two_ls_m1(R, 0, (i32)p + 1, true);
    two_ls_m1.set(0, PadicScalar::from_int(R, -1));
    two_ls_m1.set((i32)p, PadicScalar::from_int(R, 2) * E.lift.a);
    TruncSeries z(R, 0, 1, true);
    Mat2 Cs(z, qsinv.scaled(PadicScalar::from_ratio(R, N - E.n, N)),
            const_series(R, PadicScalar::from_ratio(R, E.n, N)), two_ls_m1 * qsinv);
    TruncSeries jac =
        TruncSeries::monomial(R, E.lift.a * PadicScalar::from_int(R, p), (i32)p - 1,
                              (i32)p, true);
    return Fm.derivative() + C * Fm - (Fm * Cs).right_scaled(jac);
}

PadicScalar dwork_unit_root(const UnramifiedRing& R, i32 n, const PadicScalar& alpha, i32 r,
                            const SigmaLift& lift, i32* prec_out) {
    const UnramifiedRing& S = *alpha.R;
    i64 p = S.ctx.p;
    i64 N = S.ctx.N;
    i32 M = S.ctx.M;
    if (R.ctx.p != p || R.ctx.N != N) throw DomainError("point ring mismatch");
    if (r < 1) throw DomainError("Frobenius power must be positive");
    if (!alpha.is_unit()) throw DomainError("alpha must be a unit");
    PadicScalar am1 = alpha - PadicScalar::from_int(S, 1);
    if (am1.is_zero() || am1.val_lower() >= 1) throw DomainError("alpha reduces to 1");

    PadicScalar aS = lift.a.lift_to(S);
    PadicScalar mismatch = aS * alpha.pow(p) - alpha.sigma();
    if (!mismatch.is_zero()) throw DomainError("alpha is not compatible with the lift");

    PadicScalar fp = hg_truncated_value(R, n, alpha, p);
    if (fp.is_zero() || fp.val_lower() >= 1)
        throw NonOrdinary("truncated series vanishes at the point mod p");

    i32 s = 0;
    {
        i64 pw = p; // p^(s+1)
        while (s + 2 <= M && pw <= 1000000 / p) {
            pw *= p;
            ++s;
        }
    }
    i64 Khi = 1;
    for (i32 i = 0; i <= s; ++i) Khi *= p;
    i64 Klo = Khi / p;

    PadicScalar u = PadicScalar::from_int(S, 1);
    PadicScalar beta = alpha;
    for (i32 j = 0; j < r; ++j) {
        PadicScalar num = hg_truncated_value(R, n, beta, Khi);
        PadicScalar bnext = aS * beta.pow(p);
        PadicScalar den = hg_truncated_value(R, n, bnext, Klo);
        u = u * num * den.inv();
        beta = bnext;
    }
    if (((i64)r * n * ((p - 1) / N)) % 2 != 0) u = u * PadicScalar::from_int(S, -1);
    if (!u.is_unit()) throw MismatchError("computed root is not a unit");
    if (prec_out) *prec_out = std::min<i32>(M, s + 1);
    return u;
}

} // namespace hg
