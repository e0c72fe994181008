#pragma once
#include <array>
#include <utility>
#include <vector>

#include "hg/regulator.hpp"

namespace hg {

// Rational function of x over Z/p^M whose poles are confined to the residue
// disks of x = 0, 1, 1/alpha and of the two roots of q(x) = alpha x^2 - 2x + 1,
// stored in partial-fraction blocks:
//   poly[i] x^i  +  p0[k-1] x^-k  +  p1[k-1] (1-x)^-k  +  pa[k-1] (1-alpha x)^-k
//   +  (pq[k-1][0] + pq[k-1][1] x) q(x)^-k
// Coefficients are residues mod p^M.  All block operations are exact; series
// tails are dropped only once every remaining term is divisible by p^floor.
struct FiberRat {
    std::vector<u64> poly, p0, p1, pa;
    std::vector<std::array<u64, 2>> pq;
    bool empty() const {
        return poly.empty() && p0.empty() && p1.empty() && pa.empty() && pq.empty();
    }
};

// Function on the curve y^N = f(x) = x(1-x)^(N-1)(1-alpha x); yc[j] multiplies y^j.
struct FiberFun {
    std::vector<FiberRat> yc;
};

// One-form: sum over n = 0..N-1 of wc[n] y^-n dx.
struct FiberForm {
    std::vector<FiberRat> wc;
};

enum class FiberFn { H1, H2, ConstUnit };

// Entry pair of a symbol on the fiber.  H1 is (y - zeta1(1-x))/(y - zeta2(1-x))
// with the roots of unity taken from zs, H2 is (1-alpha)x^2/(1-x)^2, ConstUnit
// is the unit scalar const_value.
struct FiberSymbol {
    FiberFn first = FiberFn::H1;
    FiberFn second = FiberFn::H2;
    SymbolChoice zs;
    PadicScalar const_value;
};

// Shared state for one (alpha, lift) pair.  sigma acts on functions through
// x -> a x^p (a = 1 mod p) and y -> y f^((p-1)/N) u with u^N = f(x^sigma)/f(x)^p,
// so the y-grading is preserved.  Requires a degree-1 coefficient ring,
// N | p - 1, and alpha a unit with alpha != 1 mod p.
class FiberContext {
  public:
    const UnramifiedRing& R;
    i64 p;
    i64 N;
    i32 W;       // ring precision: residues live mod p^W
    u64 pW;
    u64 alpha;   // Teichmuller lift
    u64 a;       // x-lift parameter
    i32 floorv;  // assembly drop floor
    i32 kmax;    // log series cutoff: k - 1 - v_p(k) >= floorv beyond it
    i32 lencap;  // guard on pole order growth

    FiberContext(const UnramifiedRing& ring, i64 alpha_residue, i64 lift_a = 1,
                 i32 floor_override = 0, i32 kmax_override = 0);

    u64 add(u64 x, u64 y) const { u64 s = x + y; return s >= pW ? s - pW : s; }
    u64 sub(u64 x, u64 y) const { return x >= y ? x - y : x + pW - y; }
    u64 neg(u64 x) const { return x ? pW - x : 0; }
    u64 mul(u64 x, u64 y) const { return mulmod(x, y, pW); }
    u64 from_i64(i64 v) const;
    u64 inv_unit(u64 x) const;      // NotInvertible on non-units
    i32 vp(u64 x) const;            // capped at W
    u64 divexact_p(u64 x, i32 k) const;  // ReductionStall if p^k does not divide x
    u64 ppow_small(i32 k) const;

    // lazily built sigma images of the basis inverses and the y-lift factor
    const FiberRat& sig_inv1();     // (1 - a x^p)^-1, expanded in the 1-disk
    const FiberRat& sig_inva();     // (1 - alpha a x^p)^-1, in the 1/alpha-disk
    const FiberRat& sig_invq();     // q(a x^p)^-1, in the q-block
    const FiberRat& y_lift();       // f^((p-1)/N) u, the factor in y^sigma = y * y_lift
    const FiberRat& y_lift_pow(i32 j);
    const FiberRat& sig_inv1_pow(i32 k);
    const FiberRat& sig_inva_pow(i32 k);
    const FiberRat& sig_invq_pow(i32 k);

    // inverse of x, 1-x or 1-alpha x (family 0, 1, 2) modulo q^K
    std::vector<u64> q_base_inv(i32 family, i32 K);

    std::vector<u64> fpoly() const; // dense coefficients of f

    // Pascal triangle rows mod p^W, grown on demand
    u64 binom(i32 n, i32 k);

  private:
    bool have_sig_ = false;
    FiberRat sinv1_, sinva_, sinvq_, ylift_;
    std::vector<FiberRat> ylift_pows_, sinv1_pows_, sinva_pows_, sinvq_pows_;
    std::array<std::pair<i32, std::vector<u64>>, 3> qinv_{};
    std::vector<std::vector<u64>> pascal_;
    void build_sigma_expansions_();
};

// Exact block arithmetic.  Contexts are non-const where cached expansions or
// Pascal rows may be touched.
FiberRat rat_scale(const FiberContext& C, const FiberRat& F, u64 c);
void rat_add_into(const FiberContext& C, FiberRat& acc, const FiberRat& F, u64 scale = 1);
FiberRat rat_mul(FiberContext& C, const FiberRat& F, const FiberRat& G);
FiberRat rat_derivative(const FiberContext& C, const FiberRat& F);
FiberRat rat_sigma(FiberContext& C, const FiberRat& F);
void rat_compress(const FiberContext& C, FiberRat& F);
i32 rat_min_vp(const FiberContext& C, const FiberRat& F);  // W when empty
u64 rat_eval(const FiberContext& C, const FiberRat& F, u64 x0);

FiberFun fun_from_rat(FiberRat r, i64 N);
FiberFun fun_mul(FiberContext& C, const FiberFun& F, const FiberFun& G);
FiberFun fun_pow(FiberContext& C, const FiberFun& F, u64 e);
FiberFun fun_sigma(FiberContext& C, const FiberFun& F);
void fun_add_into(const FiberContext& C, FiberFun& acc, const FiberFun& F, u64 scale = 1);
i32 fun_min_vp(const FiberContext& C, const FiberFun& F);

// d(G y^-n) = (G' - (n/N)(f'/f) G) y^-n dx, the exact forms used by the
// reduction; n = 0..N-1.
FiberForm exact_form(FiberContext& C, i32 n, const FiberRat& G);

// T y^-n dx as a one-form; basis_form gives omega_n = (1-x)^(n-1) y^-n dx or
// eta_n = x(1-x)^(n-1)(1-alpha x)^-1 y^-n dx.
FiberForm monomial_form(const FiberContext& C, i32 n, FiberRat T);
FiberForm basis_form(FiberContext& C, i32 n, bool eta);
void form_add_into(const FiberContext& C, FiberForm& acc, const FiberForm& F, u64 scale = 1);

// The regulator integrand of the symbol: L(first) p^-1 dlog(second^sigma)
// - L(second) dlog(first), L = the sigma-twisted log.  Entries must be units
// on the fiber; ConstUnit values must be units of the ring.
FiberForm syntomic_one_form(FiberContext& C, const FiberSymbol& sym);

// Projects a residue-free one-form onto the (omega_n, eta_n) coordinates,
// n = 1..N-1, killing exact forms.  ResidueError when an annulus residue
// survives, ReductionStall when integrality headroom runs out.
RegulatorVector reduce_to_basis(FiberContext& C, const FiberForm& w);

RegulatorVector fiber_regulator(FiberContext& C, const FiberSymbol& sym);

} // namespace hg
