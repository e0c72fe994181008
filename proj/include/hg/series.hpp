#pragma once
#include <vector>

#include "hg/padic.hpp"

namespace hg {

// Frobenius lift on the lambda-line: sigma(lambda) = a lambda^p, a in 1 + pZ_p.
struct SigmaLift {
    PadicScalar a;
    explicit SigmaLift(const PadicScalar& a_);
    i64 p() const { return a.R->ctx.p; }
};

// Laurent series truncation: coefficients for exponents lo..L-1.
// Exponents below lo are exactly zero; at L and above unknown, unless poly
// is set, in which case the series is an exact Laurent polynomial.
class TruncSeries {
  public:
    const UnramifiedRing* R = nullptr;
    i32 lo = 0;
    i32 L = 0;
    bool poly = false;
    std::vector<PadicScalar> cs; // cs[i] = coefficient of lambda^(lo+i)

    TruncSeries() = default;
    TruncSeries(const UnramifiedRing& ring, i32 lo_, i32 L_, bool poly_ = false);

    static TruncSeries zero(const UnramifiedRing& ring, i32 L);
    static TruncSeries one(const UnramifiedRing& ring, i32 L);
    static TruncSeries monomial(const UnramifiedRing& ring, const PadicScalar& c, i32 k, i32 L,
                                bool poly_ = true);

    i32 count() const { return (i32)cs.size(); }
    PadicScalar coeff(i32 exp) const; // exact zero outside the stored window
    void set(i32 exp, const PadicScalar& v);

    TruncSeries operator+(const TruncSeries& o) const;
    TruncSeries operator-(const TruncSeries& o) const;
    TruncSeries operator-() const;
    TruncSeries operator*(const TruncSeries& o) const;
    TruncSeries scaled(const PadicScalar& s) const;
    TruncSeries shifted(i32 k) const; // multiply by lambda^k
    TruncSeries inverse() const;      // NotInvertible unless unit leading coeff
    TruncSeries truncated(i32 newL) const;
    TruncSeries derivative() const;
    TruncSeries primitive(const PadicScalar& c0) const; // NotIntegrable on residue

    // f(alpha); see the gate rules in the implementation notes.
    PadicScalar evaluate(const PadicScalar& alpha) const;

    i32 min_val_lower(i32 from_exp, i32 upto_exp) const;
    i32 min_prec() const;
    bool zero_mod(i32 m, i32 upto_exp) const;
    bool congruent(const TruncSeries& o, i32 m, i32 upto_exp) const;
};

// f(a lambda^p) with sigma applied to coefficients; Lcap < 0 keeps p*L.
TruncSeries sigma_substitute(const TruncSeries& f, const SigmaLift& lift, i32 Lcap = -1);

// (1 - lambda)^(-1) = sum lambda^i
TruncSeries geometric_series(const UnramifiedRing& ring, i32 L);
// 1 - lambda as an exact polynomial
TruncSeries one_minus_lambda(const UnramifiedRing& ring, i32 L);
// lambda as an exact polynomial
TruncSeries lambda_series(const UnramifiedRing& ring, i32 L);

} // namespace hg
