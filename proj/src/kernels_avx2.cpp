#include <immintrin.h>

#include "hg/kernels.hpp"

namespace hg {

// 8 lanes of x at a time; the three skipped x values are masked to class -1,
// which no counter compares equal to. All gathered indices are in [0, Q) by
// the table contract, so no gather needs masking.
bool class_histogram_avx2(const ClassHistogramInput& in, i64* cnt) {
    if (!__builtin_cpu_supports("avx2")) return false;
    const i32 N = in.N;
    alignas(32) i32 modlut[64];
    for (i32 t = 0; t < 64; ++t) modlut[t] = t % N;

    __m256i acc[8];
    for (i32 k = 0; k < N; ++k) acc[k] = _mm256_setzero_si256();
    const __m256i iota = _mm256_setr_epi32(0, 1, 2, 3, 4, 5, 6, 7);
    const __m256i s0 = _mm256_set1_epi32((i32)in.skip0);
    const __m256i s1 = _mm256_set1_epi32((i32)in.skip1);
    const __m256i s2 = _mm256_set1_epi32((i32)in.skip2);
    const __m256i wt = _mm256_set1_epi32(in.wt);
    const i32* dlogN = in.dlogN;
    const i32* om = (const i32*)in.om;
    const i32* lm = (const i32*)in.lm;

    u32 x0 = 0;
    for (; x0 + 8 <= in.Q; x0 += 8) {
        __m256i x = _mm256_add_epi32(_mm256_set1_epi32((i32)x0), iota);
        __m256i bad = _mm256_or_si256(
            _mm256_or_si256(_mm256_cmpeq_epi32(x, s0), _mm256_cmpeq_epi32(x, s1)),
            _mm256_cmpeq_epi32(x, s2));
        __m256i o1 = _mm256_i32gather_epi32(om, x, 4);
        __m256i lx = _mm256_i32gather_epi32(lm, x, 4);
        __m256i o2 = _mm256_i32gather_epi32(om, lx, 4);
        __m256i t = _mm256_add_epi32(
            _mm256_i32gather_epi32(dlogN, x, 4),
            _mm256_add_epi32(
                _mm256_mullo_epi32(wt, _mm256_i32gather_epi32(dlogN, o1, 4)),
                _mm256_i32gather_epi32(dlogN, o2, 4)));
        __m256i c = _mm256_i32gather_epi32(modlut, t, 4);
        c = _mm256_blendv_epi8(c, _mm256_set1_epi32(-1), bad);
        for (i32 k = 0; k < N; ++k)
            acc[k] = _mm256_sub_epi32(acc[k], _mm256_cmpeq_epi32(c, _mm256_set1_epi32(k)));
    }

    for (i32 k = 0; k < N; ++k) {
        alignas(32) i32 lanes[8];
        _mm256_store_si256((__m256i*)lanes, acc[k]);
        i64 s = 0;
        for (i32 i = 0; i < 8; ++i) s += lanes[i];
        cnt[k] = s;
    }
    for (u32 x = x0; x < in.Q; ++x) {
        if (x == in.skip0 || x == in.skip1 || x == in.skip2) continue;
        i32 t = dlogN[x] + in.wt * dlogN[in.om[x]] + dlogN[in.om[in.lm[x]]];
        ++cnt[t % N];
    }
    return true;
}

} // namespace hg
