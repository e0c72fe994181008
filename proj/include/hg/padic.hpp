#pragma once
#include <array>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "hg/errors.hpp"

namespace hg {

using u32 = std::uint32_t;
using u64 = std::uint64_t;
using i32 = std::int32_t;
using i64 = std::int64_t;
using u128 = unsigned __int128;
using i128 = __int128;

inline u64 mulmod(u64 a, u64 b, u64 m) { return (u128)a * b % m; }

inline u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Prime factors with multiplicity dropped; n < 2^63.
std::vector<u64> prime_factors(u64 n);
bool is_prime_u64(u64 n);

// Base parameters shared by every object in one run; p^M must fit in 63 bits.
struct PrimeContext {
    i64 p;
    i64 N;
    i32 M;
    PrimeContext(i64 p_, i64 N_, i32 M_);
};

// Z_q / p^M, q = p^d, as (Z/p^M)[zeta]/(minpoly), zeta a Teichmuller generator:
// zeta^(q-1) = 1 exactly, sigma(zeta) = zeta^p.  d <= 4, p^M < 2^63.
class UnramifiedRing {
  public:
    static constexpr i32 DMAX = 4;
    using Elt = std::array<u64, DMAX>; // coords in 1, zeta, .., zeta^(d-1), each < p^M

    PrimeContext ctx;
    i32 d;
    u64 pM;                  // p^M
    std::vector<u64> ppow;   // p^0 .. p^M
    std::array<u64, 5> minpoly{}; // monic: X^d + minpoly[d-1] X^(d-1) + .. + minpoly[0]

    UnramifiedRing(const PrimeContext& c, i32 degree);
    UnramifiedRing(const UnramifiedRing&) = delete;
    UnramifiedRing& operator=(const UnramifiedRing&) = delete;

    u64 q1() const { return q1_; } // p^d - 1

    Elt zero() const { return Elt{}; }
    Elt one() const { Elt e{}; e[0] = 1 % pM; return e; }
    Elt gen() const; // zeta (d >= 2), 1 for d = 1
    Elt from_int(i64 v) const;

    Elt add(const Elt& a, const Elt& b) const;
    Elt sub(const Elt& a, const Elt& b) const;
    Elt neg(const Elt& a) const;
    Elt mul(const Elt& a, const Elt& b) const;
    Elt mul_small(const Elt& a, u64 s) const;
    Elt pow(Elt a, u64 e) const;
    Elt inv(const Elt& a) const; // NotInvertible unless unit
    Elt sigma(const Elt& a, i32 j = 1) const; // zeta -> zeta^(p^j)

    bool is_zero(const Elt& a) const;
    bool eq(const Elt& a, const Elt& b) const;
    i32 val(const Elt& a) const;          // min coord valuation, capped at M
    Elt shift_down(const Elt& a, i32 k) const; // divide by p^k, requires val >= k
    Elt shift_up(const Elt& a, i32 k) const;
    Elt reduce_mod(const Elt& a, i32 k) const; // mod p^k (k clamped to [0,M])

    // Unique root of unity congruent to a mod p; a must be a unit.
    Elt teichmuller_elt(const Elt& a) const;

  private:
    u64 q1_ = 0;
    // sigma_tab[j][i] = zeta^(i * p^(j+1)) for j = 0..d-2, i = 0..d-1
    std::array<std::array<Elt, DMAX>, DMAX - 1> sigma_tab_{};
    void build_minpoly_();
    void build_sigma_();
};

// One element of Z_q (or Q_q): value = c / p^neg, known mod p^prec (absolute).
// Canonical form: c reduced mod p^(prec+neg), p stripped from c while neg > 0,
// prec + neg <= M.  c = 0 with small prec means "no digits known".
class PadicScalar {
  public:
    const UnramifiedRing* R = nullptr;
    UnramifiedRing::Elt c{};
    i32 prec = 0;
    i32 neg = 0;

    PadicScalar() = default;
    PadicScalar(const UnramifiedRing& ring, UnramifiedRing::Elt v, i32 prec_, i32 neg_ = 0);

    static PadicScalar zero(const UnramifiedRing& ring);
    static PadicScalar zero(const UnramifiedRing& ring, i32 prec);
    static PadicScalar from_int(const UnramifiedRing& ring, i64 v);
    static PadicScalar from_ratio(const UnramifiedRing& ring, i64 num, i64 den);

    i32 M() const { return R->ctx.M; }
    bool is_zero() const;           // no nonzero digit within known precision
    bool is_unit() const;
    i32 val_lower() const;          // provable lower bound on valuation
    i32 val_exact() const;          // throws NotInvertible if undetermined
    i32 rel_prec() const { return prec - val_lower(); }

    PadicScalar operator+(const PadicScalar& o) const;
    PadicScalar operator-(const PadicScalar& o) const;
    PadicScalar operator-() const;
    PadicScalar operator*(const PadicScalar& o) const;
    PadicScalar operator/(const PadicScalar& o) const;
    PadicScalar inv() const;
    PadicScalar pow(i64 e) const;
    PadicScalar sigma(i32 j = 1) const;
    PadicScalar mul_ppow(i32 k) const; // exact scale by p^k (k may be negative)
    PadicScalar cap_prec(i32 m) const; // lower precision to at most m
    PadicScalar scaled_int(i64 s) const;
    UnramifiedRing::Elt raw_elt() const; // canonical representative; throws on poles

    // Embed into a larger ring (source must have d = 1).
    PadicScalar lift_to(const UnramifiedRing& ring) const;
    // Drop to the d = 1 subring; higher coords must vanish at precision.
    PadicScalar retract_to_prime(const UnramifiedRing& ring) const;

    bool congruent(const PadicScalar& o, i32 m) const; // equal mod p^min(m, precs)
    std::string str() const;

  private:
    void canon_();
};

// Teichmuller lift of a nonzero residue (rational form).
PadicScalar teichmuller(const UnramifiedRing& R, i64 c);
PadicScalar teichmuller(const UnramifiedRing& R, const UnramifiedRing::Elt& c);

// All order-th roots of unity in the smallest Z_q containing them (d <= 4).
struct RootsOfUnity {
    std::unique_ptr<UnramifiedRing> ring;
    std::vector<PadicScalar> roots; // powers of a fixed primitive root, index = exponent
};
RootsOfUnity roots_of_unity(i64 p, i32 M, i64 order);
// Same but inside a caller-held ring; order must divide p^d - 1.
std::vector<PadicScalar> roots_of_unity_in(const UnramifiedRing& R, i64 order);

// log of a 1-unit via the usual series, summed to k - v_p(k) >= m + 2.
PadicScalar log_1unit(const PadicScalar& beta);
// p^(-j) log(alpha^(p^j) / sigma^j(alpha)); branch-free logarithm.
PadicScalar log_unit(const PadicScalar& alpha, i32 sigma_power = 1);
// exp(x) for val(x) >= 1.
PadicScalar exp_small(const PadicScalar& x);

} // namespace hg
