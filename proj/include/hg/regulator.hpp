#pragma once
#include <utility>
#include <vector>

#include "hg/frobenius.hpp"

namespace hg {

// Distinct exact N-th roots of unity selecting the symbol on the fiber:
// h_1 = (y - zeta1(1-x))/(y - zeta2(1-x)), h_2 = (1-lambda)x^2/(1-x)^2.
struct SymbolChoice {
    PadicScalar zeta1, zeta2;
};

// zeta_i = w^(ki (q-1)/N); the exponents must differ mod N.
SymbolChoice make_symbol(const UnramifiedRing& R, i64 k1, i64 k2);

// 2N sum of nu^(-n) ln_2(nu) over the roots of nu^N = -1, computed in the
// smallest ring containing mu_2N and dropped back into R (which must have
// degree 1).  Default evaluation is the x-expansion; the limit-definition
// route is the independent cross-check.
PadicScalar initial_value_E2(const UnramifiedRing& R, i32 n, bool via_limit_oracle = false);

// Primitives of
//   E1' = F/(1-l) - e a l^(p-1) F^sig/(1-l^sig)
//   E2' = E1 F^(-2)/(l-l^2) + e a l^(p-1) tau^sig F^sig/(1-l^sig)
// with E1(0) = 0 and E2(0) = initial_E2; e is the component sign.  The
// epsilon pair is the basis-change image of (E1, E2).
struct RegulatorBundle {
    i32 n = 0;
    TruncSeries E1, E2, eps1, eps2;
    SigmaLift lift;
    PadicScalar initial_E2;
    // minimum coefficient precision of each series; losses are per
    // coefficient (integration denominators), not uniform
    i32 prec_E1 = 0, prec_E2 = 0, prec_eps1 = 0, prec_eps2 = 0;
};

// Component windows must reach L + 3.
RegulatorBundle build_regulator_series(const EigenComponent& E, i32 L,
                                       bool initial_via_limit = false);
RegulatorBundle build_regulator_series(const UnramifiedRing& R, i32 n, const SigmaLift& lift,
                                       i32 L);

// Residual pair of the identity behind the two ODEs: the connection applied
// to E1 omega~ + E2 eta~ minus (1 - twisted Frobenius) of the logarithmic
// input form, both rows to O(lambda^(L-2)).  The eta~ row checks the
// conjugated connection matrix against the integrand used for E2.
std::pair<TruncSeries, TruncSeries> ode_rederivation_residual(const EigenComponent& E,
                                                              const RegulatorBundle& B, i32 L);

// Symbol-scaled family over n = 1..N-1: coeff[n-1] = (zeta1^n - zeta2^n)/N,
// the scaled epsilon series, and the scaled E_i (omega~/eta~ coordinates).
struct SymbolFamily {
    SymbolChoice sym;
    std::vector<PadicScalar> coeff;
    std::vector<TruncSeries> eps1, eps2;
    std::vector<TruncSeries> E1t, E2t;
};

SymbolFamily regulator_series_at(const SymbolChoice& sym,
                                 const std::vector<RegulatorBundle>& bundles);

// Coordinates of a regulator value in the (omega_n, eta_n) family, n = 1..N-1.
struct RegulatorVector {
    std::vector<PadicScalar> c_omega, c_eta;
};

// Frobenius data of one fiber: alpha with a alpha^p = alpha^sigma, residues
// away from 0 and 1, and the evaluated entries of the action
// [[p f11, f12], [p f21, f22]].
struct FrobeniusPointData {
    PadicScalar alpha, alpha_sigma;
    PadicScalar f11, f12, f21, f22;
};

// Validates units, integrality, and the determinant identity
// (f11 f22 - f12 f21)(a^sig - (a^sig)^2) = alpha - alpha^2 to check_digits.
FrobeniusPointData frobenius_point_data(const PadicScalar& alpha, const PadicScalar& alpha_sigma,
                                        const PadicScalar& f11, const PadicScalar& f12,
                                        const PadicScalar& f21, const PadicScalar& f22,
                                        i32 check_digits);

struct ColemanSolution {
    PadicScalar s1, s2;
    PadicScalar coleman_value; // (alpha - alpha^2)^(-1) s2, sign fixed to +
    i32 residual_valuation = 0;
    i32 terms = 0; // series route only
};

// Solves sigma(s) = p A (s - eps), A the p-scaled inverse action matrix.
// r = 1: direct 2x2 solve, sigma must fix the data; r > 1: geometric series
// in sigma^(-1), k-th term carrying p^(k-1), summed past the precision cap.
// The ring degree must equal r.  SolveError on a non-unit system or when
// the residual misses the p^-(M'-2) guarantee.
ColemanSolution coleman_solve(const FrobeniusPointData& D, const PadicScalar& eps1,
                              const PadicScalar& eps2, i32 r);
ColemanSolution coleman_solve_series(const FrobeniusPointData& D, const PadicScalar& eps1,
                                     const PadicScalar& eps2, i32 r);

} // namespace hg
