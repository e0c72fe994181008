#pragma once
#include <string>

#include "hg/hgfun.hpp"
#include "hg/series.hpp"

namespace hg {

// 2x2 matrix of truncated series, row-major [[a, b], [c, d]].
struct Mat2 {
    TruncSeries a, b, c, d;

    Mat2(TruncSeries a_, TruncSeries b_, TruncSeries c_, TruncSeries d_)
        : a(std::move(a_)), b(std::move(b_)), c(std::move(c_)), d(std::move(d_)) {}

    static Mat2 zero(const UnramifiedRing& R);

    Mat2 operator+(const Mat2& o) const;
    Mat2 operator-(const Mat2& o) const;
    Mat2 operator*(const Mat2& o) const;
    Mat2 scaled(const PadicScalar& s) const;
    Mat2 derivative() const;
    Mat2 right_scaled(const TruncSeries& f) const; // entrywise * f
    TruncSeries det() const;
    Mat2 inverse() const;
    bool congruent(const Mat2& o, i32 m, i32 upto) const;
    bool zero_mod(i32 m, i32 upto) const;
};

// The lambda-independent constant of the period pairing.  `real_shape` is a
// closed form over C kept for documentation; `value` is the p-adic constant,
// computed by two displayed routes that are asserted to agree.
struct KappaResult {
    std::string real_shape;
    PadicScalar value;
};
KappaResult kappa_constants(const UnramifiedRing& R, i32 n);

// Primitive of (1/lambda)(1 - (1-lambda)^(-1) F^(-2)) with value 0 at 0.
// Coefficient at index i may carry a pole of order v_p(i); anything worse
// aborts.  F must carry window >= L.
TruncSeries tau_tilde(const HGSeries& F, i32 L);

// Same function through the K-weighted coefficient sum divided by F.
TruncSeries tau_series_via_K(const HGSeries& F, i32 L);

// K_{n,i} partial sums (index i, starting at K_0 = 0).
PadicScalar k_weight(const UnramifiedRing& R, i32 n, i32 i);

// -log^(sigma)(lambda) + kappa_p + tau~(lambda) - p^(-1) tau~(lambda^sigma).
TruncSeries tau_sigma(const HGSeries& F, const SigmaLift& lift, const PadicScalar& kappa_p,
                      i32 L);

// Connection matrix in the (omega, eta) basis, window reaching down to -1.
Mat2 gauss_manin_matrix(const UnramifiedRing& R, i32 n, i32 L);
// Connection matrix in the (omega~, eta~) basis.
Mat2 gauss_manin_matrix_tilde(const HGSeries& F, i32 L);
// (omega~ eta~) = (omega eta) B.
Mat2 basis_change_matrix(const HGSeries& F, i32 L);

struct EigenComponent {
    i32 n;
    i32 sign; // +1 or -1
    HGSeries F;
    PadicScalar kappa_p;
    TruncSeries tau_til;
    TruncSeries tau_sig;
    Mat2 fij;  // [[F11, F12], [F21, F22]]
    SigmaLift lift;

    // the matrix that acts on the basis row: [[p F11, F12], [p F21, F22]]
    Mat2 action() const;
};

// Assembles the component at series window L (internally padded so that the
// Laurent entries reach exponent L).  The explicit entry formulas and the
// basis-change conjugation route are compared, and the determinant identity
// is asserted at `det_guard` digits below M.
EigenComponent build_eigen_component(const UnramifiedRing& R, i32 n, const SigmaLift& lift,
                                     i32 L, i32 det_guard = 6);

// (lambda - lambda^2)/(lambda^sigma - (lambda^sigma)^2) as a Laurent series.
TruncSeries det_target(const UnramifiedRing& R, const SigmaLift& lift, i32 L);

// d(Fm)/dl + C(l) Fm - Fm C(l^sigma) d(l^sigma)/dl, Fm = E.action().
Mat2 horizontality_residual(const EigenComponent& E, i32 L);

// Unit root of the p^r-th Frobenius at alpha via truncated-sum ratios.
// alpha must satisfy a alpha^p = alpha^sigma and be a unit with residue
// distinct from 0 and 1.  prec_out reports the congruence depth used.
PadicScalar dwork_unit_root(const UnramifiedRing& R, i32 n, const PadicScalar& alpha, i32 r,
                            const SigmaLift& lift, i32* prec_out = nullptr);

} // namespace hg
