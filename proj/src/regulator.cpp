#include "hg/regulator.hpp"

#include <algorithm>

namespace hg {

namespace {

TruncSeries lam_minus_sq(const UnramifiedRing& R) {
    TruncSeries f(R, 1, 3, true);
    f.set(1, PadicScalar::from_int(R, 1));
    f.set(2, PadicScalar::from_int(R, -1));
    return f;
}

// a l^(p-1) F^sig / (1 - l^sig), the sigma-side factor common to both ODEs;
// the 1/p of the displayed equations cancels against d(l^sig)/dl exactly
TruncSeries sigma_side(const EigenComponent& E, i32 L) {
    const UnramifiedRing& R = *E.F.series.R;
    i32 p = (i32)R.ctx.p;
    TruncSeries Fsig = sigma_substitute(E.F.series, E.lift, L);
    TruncSeries gsig = sigma_substitute(geometric_series(R, L), E.lift, L);
    TruncSeries apow = TruncSeries::monomial(R, E.lift.a, p - 1, L, true);
    return (apow * Fsig * gsig).truncated(L);
}

} // namespace

SymbolChoice make_symbol(const UnramifiedRing& R, i64 k1, i64 k2) {
    i64 N = R.ctx.N;
    if ((((k1 - k2) % N) + N) % N == 0) throw DomainError("symbol roots must differ");
    auto roots = roots_of_unity_in(R, N);
    return {roots[(size_t)(((k1 % N) + N) % N)], roots[(size_t)(((k2 % N) + N) % N)]};
}

PadicScalar initial_value_E2(const UnramifiedRing& R, i32 n, bool via_limit_oracle) {
    if (R.d != 1) throw DomainError("initial value lives over the prime ring");
    i64 N = R.ctx.N;
    i64 p = R.ctx.p;
    if (n < 1 || n >= N) throw DomainError("eigen index out of range");
    RootsOfUnity mu = roots_of_unity(p, R.ctx.M, 2 * N);
    const UnramifiedRing& S = *mu.ring;
    PadicScalar minus1 = PadicScalar::from_int(S, -1);
    PolylogFn ln2;
    if (!via_limit_oracle) ln2 = build_polylog_calibrated(S, 2);
    i32 s = (p == 5) ? 7 : (p == 7) ? 6 : 4; // limit-term index, error ~ p^-s
    PadicScalar acc = PadicScalar::zero(S, R.ctx.M);
    i32 hits = 0;
    for (const PadicScalar& nu : mu.roots) {
        if (!(nu.pow(N) - minus1).is_zero()) continue;
        ++hits;
        PadicScalar v =
            via_limit_oracle ? polylog_limit_oracle(2, nu, s).cap_prec(s) : ln2.eval_at_z(nu);
        acc = acc + nu.pow(-(i64)n) * v;
    }
    if (hits != (i32)N) throw MismatchError("mu_2N enumeration came up short");
    acc = acc.scaled_int(2 * N);
    if (S.d == 1) return PadicScalar(R, UnramifiedRing::Elt{acc.c[0]}, acc.prec, acc.neg);
    return acc.retract_to_prime(R);
}

RegulatorBundle build_regulator_series(const EigenComponent& E, i32 L, bool initial_via_limit) {
    const UnramifiedRing& R = *E.F.series.R;
    i32 M = R.ctx.M;
    if (L < 4) throw DomainError("window too small");
    if (E.F.series.L < L + 3 || E.tau_sig.L < L + 3)
        throw DomainError("component windows must reach L + 3");
    i32 Lp = std::min(E.F.series.L, E.tau_sig.L);

    TruncSeries F = E.F.series.truncated(Lp);
    TruncSeries geom = geometric_series(R, Lp);
    TruncSeries sig = sigma_side(E, Lp);
    PadicScalar e = PadicScalar::from_int(R, E.sign);

    TruncSeries rhs1 = F * geom - sig.scaled(e);
    TruncSeries E1 = rhs1.primitive(PadicScalar::zero(R, M));

    TruncSeries lminv = lam_minus_sq(R).truncated(Lp + 2).inverse(); // [-1, Lp)
    TruncSeries Finv2 = (F * F).inverse();
    PadicScalar c0 = initial_value_E2(R, E.n, initial_via_limit);
    // E1(0) = 0 cancels the simple pole; a surviving residue aborts in
    // primitive() and means the right side was transcribed wrong
    TruncSeries rhs2 = E1 * Finv2 * lminv + (E.tau_sig.truncated(Lp) * sig).scaled(e);
    TruncSeries E2 = rhs2.primitive(c0);

    Mat2 B = basis_change_matrix(E.F, Lp);
    TruncSeries eps1 = B.a * E1 + B.b * E2;
    TruncSeries eps2 = B.c * E1 + B.d * E2;

    RegulatorBundle out{E.n,
                        E1.truncated(L),
                        E2.truncated(L),
                        eps1.truncated(L),
                        eps2.truncated(L),
                        E.lift,
                        c0};
    out.prec_E1 = out.E1.min_prec();
    out.prec_E2 = out.E2.min_prec();
    out.prec_eps1 = out.eps1.min_prec();
    out.prec_eps2 = out.eps2.min_prec();
    return out;
}

RegulatorBundle build_regulator_series(const UnramifiedRing& R, i32 n, const SigmaLift& lift,
                                       i32 L) {
    EigenComponent E = build_eigen_component(R, n, lift, L);
    return build_regulator_series(E, L);
}

std::pair<TruncSeries, TruncSeries> ode_rederivation_residual(const EigenComponent& E,
                                                              const RegulatorBundle& B, i32 L) {
    const UnramifiedRing& R = *E.F.series.R;
    if (B.E1.L < L || B.E2.L < L) throw DomainError("bundle window too small");
    Mat2 Ct = gauss_manin_matrix_tilde(E.F, L);
    TruncSeries F = E.F.series.truncated(L);
    TruncSeries sig = sigma_side(E, L);
    PadicScalar e = PadicScalar::from_int(R, E.sign);
    TruncSeries u1 = F * geometric_series(R, L) - sig.scaled(e);
    TruncSeries u2 = (E.tau_sig.truncated(L) * sig).scaled(e);
    TruncSeries r1 = B.E1.derivative() + Ct.a * B.E1 + Ct.b * B.E2 - u1;
    TruncSeries r2 = B.E2.derivative() + Ct.c * B.E1 + Ct.d * B.E2 - u2;
    return {r1.truncated(L - 2), r2.truncated(L - 2)};
}

SymbolFamily regulator_series_at(const SymbolChoice& sym,
                                 const std::vector<RegulatorBundle>& bundles) {
    if (bundles.empty()) throw DomainError("no bundles supplied");
    const UnramifiedRing& R = *bundles[0].E1.R;
    i64 N = R.ctx.N;
    if ((i64)bundles.size() != N - 1) throw DomainError("bundles must cover n = 1..N-1");
    if (sym.zeta1.R != &R || sym.zeta2.R != &R) throw DomainError("symbol ring mismatch");
    PadicScalar invN = PadicScalar::from_ratio(R, 1, N);
    SymbolFamily fam;
    fam.sym = sym;
    for (i64 n = 1; n < N; ++n) {
        const RegulatorBundle& b = bundles[(size_t)n - 1];
        if (b.n != (i32)n) throw DomainError("bundle order mismatch");
        PadicScalar c = (sym.zeta1.pow(n) - sym.zeta2.pow(n)) * invN;
        fam.coeff.push_back(c);
        fam.eps1.push_back(b.eps1.scaled(c));
        fam.eps2.push_back(b.eps2.scaled(c));
        fam.E1t.push_back(b.E1.scaled(c));
        fam.E2t.push_back(b.E2.scaled(c));
    }
    return fam;
}

namespace {

struct SMat {
    PadicScalar a, b, c, d;
};

SMat smul(const SMat& x, const SMat& y) {
    return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
            x.c * y.b + x.d * y.d};
}

SMat ssig(const SMat& x, i32 j) {
    return {x.a.sigma(j), x.b.sigma(j), x.c.sigma(j), x.d.sigma(j)};
}

std::pair<PadicScalar, PadicScalar> sapply(const SMat& m, const PadicScalar& v1,
                                           const PadicScalar& v2) {
    return {m.a * v1 + m.b * v2, m.c * v1 + m.d * v2};
}

// A = p * action(alpha)^(-1) = ratio^(-1) [[f22, -f12], [-p f21, p f11]],
// ratio = (alpha - alpha^2)/(alpha^sig - (alpha^sig)^2)
SMat inverse_action_scaled(const FrobeniusPointData& D) {
    PadicScalar ri =
        (D.alpha_sigma - D.alpha_sigma * D.alpha_sigma) * (D.alpha - D.alpha * D.alpha).inv();
    return {ri * D.f22, -(ri * D.f12), -(ri * D.f21).mul_ppow(1), (ri * D.f11).mul_ppow(1)};
}

i32 data_prec(const FrobeniusPointData& D, const PadicScalar& e1, const PadicScalar& e2) {
    return std::min({D.alpha.prec, D.alpha_sigma.prec, D.f11.prec, D.f12.prec, D.f21.prec,
                     D.f22.prec, e1.prec, e2.prec});
}

ColemanSolution finish(const FrobeniusPointData& D, const PadicScalar& e1, const PadicScalar& e2,
                       const PadicScalar& s1, const PadicScalar& s2, i32 terms) {
    SMat A = inverse_action_scaled(D);
    auto [t1, t2] = sapply(A, s1 - e1, s2 - e2);
    PadicScalar r1 = s1.sigma(1) - t1.mul_ppow(1);
    PadicScalar r2 = s2.sigma(1) - t2.mul_ppow(1);
    i32 rv = std::min(r1.val_lower(), r2.val_lower());
    if (rv < data_prec(D, e1, e2) - 2)
        throw SolveError("fixed-point residual misses the guarantee");
    PadicScalar cv = (D.alpha - D.alpha * D.alpha).inv() * s2;
    return {s1, s2, cv, rv, terms};
}

i32 sig_exp(i32 d, i32 k) { return (d - (k % d)) % d; } // sigma^(-k) as a forward power

} // namespace

FrobeniusPointData frobenius_point_data(const PadicScalar& alpha, const PadicScalar& alpha_sigma,
                                        const PadicScalar& f11, const PadicScalar& f12,
                                        const PadicScalar& f21, const PadicScalar& f22,
                                        i32 check_digits) {
    const UnramifiedRing* R = alpha.R;
    for (const PadicScalar* v : {&alpha_sigma, &f11, &f12, &f21, &f22})
        if (v->R != R) throw DomainError("mixed rings");
    PadicScalar one = PadicScalar::from_int(*R, 1);
    if (!alpha.is_unit() || !(one - alpha).is_unit() || !alpha_sigma.is_unit() ||
        !(one - alpha_sigma).is_unit())
        throw DomainError("alpha must avoid the residues 0 and 1");
    for (const PadicScalar* v : {&f11, &f12, &f21, &f22})
        if (!v->is_zero() && v->val_lower() < 0)
            throw DomainError("matrix entries must be integral");
    PadicScalar lhs = (f11 * f22 - f12 * f21) * (alpha_sigma - alpha_sigma * alpha_sigma);
    if (!lhs.congruent(alpha - alpha * alpha, check_digits))
        throw MismatchError("determinant identity failed at the point");
    return {alpha, alpha_sigma, f11, f12, f21, f22};
}

ColemanSolution coleman_solve(const FrobeniusPointData& D, const PadicScalar& eps1,
                              const PadicScalar& eps2, i32 r) {
    const UnramifiedRing& R = *D.alpha.R;
    if (r < 1) throw DomainError("r must be positive");
    if (R.d != r) throw DomainError("ring degree must equal r");
    if (r > 1) return coleman_solve_series(D, eps1, eps2, r);
    i32 mp = data_prec(D, eps1, eps2);
    if (!D.alpha_sigma.congruent(D.alpha, mp))
        throw DomainError("sigma must fix the point when r = 1");
    SMat A = inverse_action_scaled(D);
    PadicScalar one = PadicScalar::from_int(R, 1);
    SMat Msys{one - A.a.mul_ppow(1), -A.b.mul_ppow(1), -A.c.mul_ppow(1), one - A.d.mul_ppow(1)};
    PadicScalar det = Msys.a * Msys.d - Msys.b * Msys.c;
    if (!det.is_unit()) throw SolveError("linear system is singular at working precision");
    auto [b1, b2] = sapply(A, eps1, eps2);
    PadicScalar di = det.inv();
    PadicScalar rb1 = -b1.mul_ppow(1);
    PadicScalar rb2 = -b2.mul_ppow(1);
    PadicScalar s1 = (Msys.d * rb1 - Msys.b * rb2) * di;
    PadicScalar s2 = (Msys.a * rb2 - Msys.c * rb1) * di;
    return finish(D, eps1, eps2, s1, s2, 0);
}

ColemanSolution coleman_solve_series(const FrobeniusPointData& D, const PadicScalar& eps1,
                                     const PadicScalar& eps2, i32 r) {
    const UnramifiedRing& R = *D.alpha.R;
    if (r < 1) throw DomainError("r must be positive");
    if (R.d != r) throw DomainError("ring degree must equal r");
    SMat A = inverse_action_scaled(D);
    i32 cap = std::min(R.ctx.M, data_prec(D, eps1, eps2)) + 1;
    PadicScalar acc1 = PadicScalar::zero(R, R.ctx.M);
    PadicScalar acc2 = acc1;
    SMat P = ssig(A, sig_exp(R.d, 1));
    i32 terms = 0;
    for (i32 k = 1; k <= cap; ++k) {
        if (k > 1) P = smul(P, ssig(A, sig_exp(R.d, k)));
        i32 js = sig_exp(R.d, k);
        auto [t1, t2] = sapply(P, eps1.sigma(js), eps2.sigma(js));
        acc1 = acc1 - t1.mul_ppow(k - 1); // k-th term valuation >= k-1
        acc2 = acc2 - t2.mul_ppow(k - 1);
        ++terms;
    }
    return finish(D, eps1, eps2, acc1.mul_ppow(1), acc2.mul_ppow(1), terms);
}

} // namespace hg
