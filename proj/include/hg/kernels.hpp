#pragma once
#include "hg/padic.hpp"

namespace hg {

// sum over 1 <= n < ps with p not dividing n of z^n * n^(-r), mod p^M.
// r < 0 means weight n^|r| instead. Runs in fixed-size blocks with one
// modular inversion per block; the result does not depend on the block
// decomposition since addition mod p^M is exact.
UnramifiedRing::Elt limit_oracle_sum(const UnramifiedRing& R, const UnramifiedRing::Elt& z,
                                     i32 r, i64 ps);

// Class histogram over a packed finite field of Q elements: for every x
// outside the three skipped values,
//   class(x) = (dlogN[x] + wt * dlogN[om[x]] + dlogN[om[lm[x]]]) mod N
// and cnt[class] is incremented. dlogN entries are already reduced mod N;
// om and lm are total maps Q -> Q so every gather stays in bounds.
struct ClassHistogramInput {
    const i32* dlogN;
    const u32* om; // 1 - x
    const u32* lm; // lam * x
    u32 Q;
    i32 N;  // 2..8
    i32 wt; // 0..7
    u32 skip0, skip1, skip2;
};

void class_histogram_scalar(const ClassHistogramInput& in, i64* cnt);

// Returns false when this build has no AVX2 variant or the cpu lacks it.
bool class_histogram_avx2(const ClassHistogramInput& in, i64* cnt);

// Runtime-dispatched entry point; both variants count identically.
void class_histogram(const ClassHistogramInput& in, i64* cnt);

} // namespace hg
