#pragma once
#include "hg/series.hpp"

namespace hg {

struct HGSeries {
    i32 n = 0;
    TruncSeries series;    // F_n(lambda) to O(lambda^L)
    TruncSeries truncated; // F_{n,<p}, an exact polynomial
};

// 2F1(A/D, B/D, C/D; lambda) by exact Pochhammer streaming; every p-power in
// a denominator must cancel against the numerator, else DomainError.
TruncSeries hyp2f1_series(const UnramifiedRing& ring, i64 A, i64 B, i64 C, i64 D, i32 L);

HGSeries build_hg(const UnramifiedRing& ring, i32 n, i32 L);

// partial sum  sum_{i<K} c_i alpha^i  of the F_n coefficients, streamed so K
// may be large without materializing a series
PadicScalar hg_truncated_value(const UnramifiedRing& ring, i32 n, const PadicScalar& alpha,
                               i64 K);

class PolylogFn {
  public:
    i32 r = 0;
    TruncSeries x_expansion; // exact polynomial approximant in x = (1-z)^{-1}
    i32 claimed_prec = 0;    // absolute precision certified for unit-x evaluation
    i32 terms = 0;           // number of x-terms summed during evaluation
    bool calibrated = false;

    PadicScalar eval_at_x(const PadicScalar& x) const;
    PadicScalar eval_at_z(const PadicScalar& z) const;
};

// x-expansion route, 1 <= r <= 4
PolylogFn build_polylog(const UnramifiedRing& ring, i32 r);

// rational route for r <= 0 (down to r = -4)
TruncSeries polylog_nonpos(const UnramifiedRing& ring, i32 r);

// s-th term of the limit definition, by direct block summation
PadicScalar polylog_limit_oracle(i32 r, const PadicScalar& z, i32 s);

// build_polylog plus term-count/precision calibration against the limit
// oracle at three control points, with a 50% term-count margin
PolylogFn build_polylog_calibrated(const UnramifiedRing& ring, i32 r);

// log of f^p / f^sigma scaled by 1/p; f must be a unit series times a power
// of lambda
TruncSeries log_sigma_series(const TruncSeries& f, const SigmaLift& lift);

} // namespace hg
