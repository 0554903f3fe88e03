#pragma once
#include <string>
#include <vector>

#include "zetagcd/bigint.hpp"
#include "zetagcd/errors.hpp"

// Integer and rational univariate polynomials (index = degree, trimmed),
// and the reversed-convention zeta numerators: f(T) = prod_j (1 - α_j T)
// with f(0) = 1, carried together with the base size q and the weight w,
// so the expected inverse-root modulus is q^{w/2}.

namespace zetagcd::poly {

using IntPoly = std::vector<Int>;
using RatPoly = std::vector<Rat>;

IntPoly itrim(IntPoly f);
int ideg(const IntPoly &f); // -1 for the zero polynomial
IntPoly iadd(const IntPoly &a, const IntPoly &b);
IntPoly isub(const IntPoly &a, const IntPoly &b);
IntPoly imul(const IntPoly &a, const IntPoly &b);
Int ieval(const IntPoly &f, const Int &x);
std::string ipoly_str(const IntPoly &f, const std::string &var = "T");

RatPoly to_rat(const IntPoly &f);
// exact conversion; throws NonIntegralCoefficient if any entry is not integral
IntPoly to_int_exact(const RatPoly &f);
RatPoly rtrim(RatPoly f);
int rdeg(const RatPoly &f);
RatPoly radd(const RatPoly &a, const RatPoly &b);
RatPoly rsub(const RatPoly &a, const RatPoly &b);
RatPoly rmul(const RatPoly &a, const RatPoly &b);
std::pair<RatPoly, RatPoly> rdivmod(const RatPoly &a, const RatPoly &b);
RatPoly rexact_div(const RatPoly &a, const RatPoly &b);
RatPoly rderivative(const RatPoly &f);
RatPoly rmonic(const RatPoly &f);

// monic gcd over Q, renormalized to constant term 1 when that is nonzero
// (the zeta-factor convention); throws BothZero when both inputs vanish
RatPoly poly_gcd(const RatPoly &a, const RatPoly &b);
inline RatPoly poly_gcd(const IntPoly &a, const IntPoly &b) {
    return poly_gcd(to_rat(a), to_rat(b));
}

// resultant of two nonzero integer polynomials, Sylvester matrix with
// fraction-free (Bareiss) elimination; throws ZeroInput
Int resultant(const IntPoly &f, const IntPoly &g);

// Yun decomposition f = prod_i out[i].first ^ out[i].second with the
// factors squarefree and pairwise coprime (monic)
std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly &f);

struct WeilPoly {
    IntPoly c; // c[0] == 1
    Int q = 0; // base size
    int w = 1; // weight: inverse roots should have modulus q^{w/2}

    int degree() const { return ideg(c); }
    bool operator==(const WeilPoly &o) const {
        return c == o.c && q == o.q && w == o.w;
    }
};

std::string weil_str(const WeilPoly &f);

// f^{(r)}(T) = prod_j (1 - α_j^r T), base q^r, computed exactly through
// Newton power sums; throws NonUnitConstantTerm if f(0) != 1, and a
// plain runtime_error if a reconstructed coefficient is non-integral
// (cannot happen for true products of (1 - α_j T))
WeilPoly power_map(const WeilPoly &f, int r);

struct WeilReport {
    bool ok = false;
    std::string reason;       // empty when ok
    int sign = +1;            // functional-equation sign (see below)
    double max_modulus_err = 0; // max relative | |α| - sqrt(λ) | / sqrt(λ)
};

// Functional-equation check a_{s-i} = sign * λ^{(s-2i)/2} a_i (exact
// integer arithmetic; both signs tried, the satisfied one reported; odd
// degree additionally needs λ to be a perfect square) plus a modulus
// check |α_j| ≈ sqrt(λ) on the isolated inverse roots.  λ must equal
// q^w; the convenience overload fills it in.
WeilReport is_weil(const WeilPoly &f, const Int &lambda, double tol = 1e-6);
inline WeilReport is_weil(const WeilPoly &f, double tol = 1e-6) {
    return is_weil(f, ipow(f.q, f.w), tol);
}

// Base descent: given f1 = f^{(r1)} and f2 = f^{(r2)} with gcd(r1,r2)=1,
// recover f.  Inverse roots are isolated at high precision, candidates
// α = β^a γ^b (a r1 + b r2 = 1) are matched bipartitely at relative
// tolerance 2^-40, and every candidate polynomial is verified exactly
// through power_map before being accepted.
WeilPoly recover_base(const WeilPoly &f1, int r1, const WeilPoly &f2, int r2,
                      const Int &q, int w);

} // namespace zetagcd::poly
