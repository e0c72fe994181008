#include <doctest.h>

#include <random>
#include <vector>

#include "hg/kernels.hpp"

using namespace hg;

namespace {

struct Tables {
    std::vector<i32> dlogN;
    std::vector<u32> om, lm;
    ClassHistogramInput in;
};

Tables random_tables(u32 Q, i32 N, u32 seed) {
    Tables t;
    std::mt19937 rng(seed);
    t.dlogN.resize(Q);
    t.om.resize(Q);
    t.lm.resize(Q);
    for (u32 x = 0; x < Q; ++x) {
        t.dlogN[x] = (i32)(rng() % (u32)N);
        t.om[x] = rng() % Q;
        t.lm[x] = rng() % Q;
    }
    u32 s0 = rng() % Q, s1 = rng() % Q, s2 = rng() % Q;
    while (s1 == s0) s1 = rng() % Q;
    while (s2 == s0 || s2 == s1) s2 = rng() % Q;
    t.in = ClassHistogramInput{t.dlogN.data(), t.om.data(), t.lm.data(),
                               Q,              N,           N - 1,
                               s0,             s1,          s2};
    return t;
}

} // namespace

TEST_CASE("class histogram: scalar and vector kernels count identically") {
    u32 seed = 1234;
    for (u32 Q : {64u, 257u, 1000u, 4099u})
        for (i32 N : {2, 3, 4, 5, 6, 7, 8}) {
            Tables t = random_tables(Q, N, seed++);
            std::vector<i64> a(N), b(N), c(N);
            class_histogram_scalar(t.in, a.data());
            i64 total = 0;
            for (i64 v : a) total += v;
            CHECK(total == (i64)Q - 3);
            if (class_histogram_avx2(t.in, b.data())) {
                CHECK(a == b);
            }
            class_histogram(t.in, c.data());
            CHECK(a == c);
        }
}

TEST_CASE("class histogram: skips outside the range leave all classes counted") {
    Tables t = random_tables(512, 3, 77);
    t.in.skip0 = t.in.skip1 = t.in.skip2 = 1u << 30;
    std::vector<i64> a(3), b(3);
    class_histogram_scalar(t.in, a.data());
    CHECK(a[0] + a[1] + a[2] == 512);
    if (class_histogram_avx2(t.in, b.data())) CHECK(a == b);
}
