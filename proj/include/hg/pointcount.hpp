#pragma once
#include <array>
#include <vector>

#include "hg/frobenius.hpp"
#include "hg/padic.hpp"

namespace hg {

// F_{p^e} with full exp/dlog tables. Elements are packed base-p digit strings
// of polynomials modulo the lex-smallest irreducible monic minpoly; p^e is
// capped so the tables stay desk-sized.
class SmallField {
  public:
    i64 p;
    i32 e;
    u32 size; // p^e
    std::vector<i32> minpoly; // c_0..c_{e-1} with x^e + sum c_i x^i; empty for e = 1
    u32 g = 0;                // smallest packed generator of the unit group
    std::vector<u32> expt;    // g^k for k in [0, size-1)
    std::vector<i32> dlog;    // inverse of expt on nonzero elements; dlog[0] = 0
    std::vector<u32> one_minus;

    SmallField(i64 p, i32 e, u32 gen_override = 0);

    u32 add(u32 a, u32 b) const;
    u32 sub(u32 a, u32 b) const;
    u32 mul(u32 a, u32 b) const; // digit multiply, table-free
    u32 mul_t(u32 a, u32 b) const;
    u32 pow(u32 a, u64 k) const;
    u32 inv(u32 a) const;
    u32 from_int(i64 v) const;
    bool prime_field(u32 a) const { return a < (u32)p; }
};

// Exact element of Z[zeta_N]: integer coordinates on 1, zeta, ..,
// zeta^{phi(N)-1} after reduction mod the N-th cyclotomic polynomial.
class CycInt {
  public:
    i32 N = 1;
    std::vector<i64> c;

    CycInt() = default;
    explicit CycInt(i32 N, i64 constant = 0);
    static CycInt zeta_pow(i32 N, i64 k);

    CycInt operator+(const CycInt& o) const;
    CycInt operator-(const CycInt& o) const;
    CycInt operator*(const CycInt& o) const;
    CycInt scaled(i64 s) const;
    CycInt conj() const; // zeta -> zeta^{-1}
    bool operator==(const CycInt& o) const;
    bool is_zero() const;
    bool is_rational() const;
    i64 rational() const; // DomainError unless is_rational
    bool divisible(i64 m) const;
    CycInt divided(i64 m) const;
    // residue of the image under zeta -> w, an integer of order N mod p
    i64 residue_at(i64 w, i64 p) const;
    double abs_embedding(i32 k) const; // zeta -> exp(2 pi i k / N)
    PadicScalar embed(const UnramifiedRing& R, i64 w) const; // zeta -> teichmuller(w)
};

// Character-sum side of the unit-root comparison: dlog-class histograms over
// F_{q^j}, j = 1, 2, for y^N = x(1-x)^{N-1}(1-lambda x). Requires N | p-1 so
// the character takes prime-field Teichmuller values.
class CurveInstance {
  public:
    i64 p, N;
    i32 r;
    u64 q;
    i64 lambda_int; // prime-field representative, not 0 or 1 mod p
    SmallField F1, F2;
    i32 w1; // chi(g) is the Teichmuller lift of this; exact order N mod p
    i32 m2; // chi on F_{q^2} sends its generator to zeta^m2
    std::array<std::vector<i64>, 2> cnt;

    CurveInstance(i64 p, i64 N, i32 r, i64 lambda, u32 gen_override = 0);
};

// S_n(lambda; q^j) with the chi(0) = 0 convention, exact in Z[zeta_N].
CycInt character_sum(const CurveInstance& cv, i32 n, i32 j);

struct ComponentCharPoly {
    i32 n;
    CycInt t1, t2;      // power sums of the two Frobenius eigenvalues
    CycInt trace, norm; // charpoly T^2 - trace T + norm
    bool supersingular; // trace vanishes at the working prime above p
};

// Trace convention and the smooth-model corrections are frozen constants,
// cross-checked against brute-force counts whenever the fields are small
// enough to enumerate; a failed cross-check is a CalibrationError.
ComponentCharPoly component_charpoly(const CurveInstance& cv, i32 n);

// #points of the affine curve over F_{q^j} by direct enumeration.
i64 brute_affine_count(const CurveInstance& cv, i32 j);

// q^j + 1 - (sum over components of the j-th eigenvalue power sums).
i64 smooth_count_from_charpolys(const CurveInstance& cv, i32 j);

// Truncated hypergeometric sum mod p; zero exactly at supersingular residues.
i64 hyp_trunc_modp(i64 p, i64 N, i32 n, i64 lam);

struct UnitRootReport {
    bool match;
    i32 agreement_digits;
    i32 compared_digits;
    PadicScalar pc_root, dwork_root;
};

// Hensel root of the component charpoly against the hypergeometric limit.
// MismatchError below `required` agreeing digits; NonOrdinary when the
// component has no unit eigenvalue.
UnitRootReport verify_unit_root(const CurveInstance& cv, i32 n, const PadicScalar& alpha,
                                i32 r, const SigmaLift& lift, i32 required = 4);

} // namespace hg
