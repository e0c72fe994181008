#include "hg/kernels.hpp"

#include <algorithm>
#include <vector>

#include "hg/errors.hpp"

namespace hg {

namespace {

u64 modinv_ppow(u64 a, u64 pM, i64 p) {
    // unit group of Z/p^M has order (p-1)p^(M-1)
    u64 ord = pM / (u64)p * (u64)(p - 1);
    return powmod(a, ord - 1, pM);
}

} // namespace

UnramifiedRing::Elt limit_oracle_sum(const UnramifiedRing& R, const UnramifiedRing::Elt& z,
                                     i32 r, i64 ps) {
    const i64 p = R.ctx.p;
    const u64 pM = R.pM;
    UnramifiedRing::Elt sum = R.zero();
    UnramifiedRing::Elt zn = R.one();
    constexpr i64 B = 4096;
    std::vector<u64> ns, invs, pref;
    std::vector<UnramifiedRing::Elt> zns;
    for (i64 n0 = 1; n0 < ps; n0 += B) {
        i64 n1 = std::min(ps, n0 + B);
        ns.clear();
        zns.clear();
        for (i64 n = n0; n < n1; ++n) {
            zn = R.mul(zn, z);
            if (n % p == 0) continue;
            ns.push_back((u64)(n % (i64)pM));
            zns.push_back(zn);
        }
        if (ns.empty()) continue;
        invs.assign(ns.size(), 1);
        if (r > 0) {
            pref.resize(ns.size());
            u64 acc = 1;
            for (size_t i = 0; i < ns.size(); ++i) {
                acc = mulmod(acc, ns[i], pM);
                pref[i] = acc;
            }
            u64 ia = modinv_ppow(acc, pM, p);
            for (size_t i = ns.size(); i-- > 0;) {
                invs[i] = (i == 0) ? ia : mulmod(ia, pref[i - 1], pM);
                ia = mulmod(ia, ns[i], pM);
            }
        }
        for (size_t i = 0; i < ns.size(); ++i) {
            u64 w = 1;
            if (r > 0) {
                w = invs[i];
                for (i32 t = 1; t < r; ++t) w = mulmod(w, invs[i], pM);
            } else if (r < 0) {
                w = powmod(ns[i], (u64)(-r), pM);
            }
            sum = R.add(sum, R.mul_small(zns[i], w));
        }
    }
    return sum;
}

void class_histogram_scalar(const ClassHistogramInput& in, i64* cnt) {
    for (i32 k = 0; k < in.N; ++k) cnt[k] = 0;
    for (u32 x = 0; x < in.Q; ++x) {
        if (x == in.skip0 || x == in.skip1 || x == in.skip2) continue;
        u32 o1 = in.om[x];
        u32 o2 = in.om[in.lm[x]];
        i32 t = in.dlogN[x] + in.wt * in.dlogN[o1] + in.dlogN[o2];
        ++cnt[t % in.N];
    }
}

#ifndef HG_HAVE_AVX2_TU
bool class_histogram_avx2(const ClassHistogramInput&, i64*) { return false; }
#endif

void class_histogram(const ClassHistogramInput& in, i64* cnt) {
    if (class_histogram_avx2(in, cnt)) return;
    class_histogram_scalar(in, cnt);
}

} // namespace hg
