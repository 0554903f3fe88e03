#pragma once
#include <cstdint>
#include <map>
#include <vector>

#include "zetagcd/bigint.hpp"
#include "zetagcd/errors.hpp"
#include "zetagcd/ff.hpp"
#include "zetagcd/poly.hpp"

// Projective varieties cut out by homogeneous equations over F_q, exact
// point counts over extension fields, and zeta-numerator recovery for
// smooth plane curves.  Every projective point is counted once via its
// canonical representative (first nonzero coordinate = 1).  Plane curves
// are counted line by line -- O(q^k * d) through distinct-root counts in
// the last variable -- everything else by a full scan under a cap.

namespace zetagcd::variety {

// coefficient times prod_i x_i^{exp[i]}
struct Term {
    std::vector<int> exp;
    ff::Coeffs c;
};
using Equation = std::vector<Term>;

struct ProjVariety {
    ff::FieldPtr F;
    int nvars = 0; // homogeneous coordinates; the ambient space is P^{nvars-1}
    std::vector<Equation> equations;
    int dim_hint = -1; // expected dimension, -1 when unknown
    int degree = 1;    // product of the equation degrees
};

// extension degree -> exact point count over F_{q^k}
using CountTable = std::map<int, long long>;

// Validates and normalizes: exponent vectors must have length nvars and
// no negative entries, coefficients are reduced into F (SizeMismatch if
// longer than the field degree), duplicate monomials merge, and each
// equation must be homogeneous (NotHomogeneous) and survive the merge
// (ZeroInput).  No equations at all describes the whole of P^{nvars-1}.
ProjVariety make_variety(ff::FieldPtr F, int nvars,
                         std::vector<Equation> equations, int dim_hint = -1);

// total degree of equation i
int equation_degree(const ProjVariety &V, std::size_t i);

// #V(F_{q^k}).  k = 1 counts over F itself; k > 1 builds
// field_make(p, k * F->k, F->seed) and pushes the coefficients through
// the canonical embedding.  Plane curves (nvars == 3, one equation) go
// line by line; all other varieties scan every canonical representative,
// and either way the enumerated set must fit under cap
// (EnumerationCapExceeded).
long long count_points(const ProjVariety &V, int k,
                       std::uint64_t cap = ff::kDefaultEnumCap);

// (d-1)(d-2)/2
int genus_plane(int d);

// Zeta numerator prod_j (1 - alpha_j T), j <= 2g, of a smooth plane
// curve: counts N_1..N_g, forms the power sums q^m + 1 - N_m, solves the
// Newton identities for the coefficients up to degree g and fills in the
// rest with the functional equation a_{2g-i} = q^{g-i} a_i.  A
// fractional Newton step throws NonIntegralCoefficient and a result
// that is not pure of weight 1 throws WeilCheckFailed -- both typically
// mean the curve was singular after all.  While q^{g+1} stays small the
// predicted count over F_{q^{g+1}} is also checked against a direct one.
// Smoothness itself is the caller's burden; g must equal
// genus_plane(degree).
poly::WeilPoly curve_numerator(const ProjVariety &C, int g);

// The hypersurface together with all of its partial derivatives as
// extra equations; its points are exactly the singular points.
ProjVariety singular_scheme(const ProjVariety &V);

// Every F_{q^k}-point of V as a vector of canonical coordinate keys, in
// scan order (leading nonzero coordinate normalized to 1).
std::vector<std::vector<Int>> common_zeros(const ProjVariety &V, int k,
                                           std::uint64_t cap = ff::kDefaultEnumCap);

struct SmoothReport {
    bool smooth = false;
    bool exact = false; // witness in hand, or plane curve swept past (d-1)^2
    int witness_k = 0;  // extension degree of the singular point, 0 if none
    std::vector<Int> witness; // its coordinates as canonical keys
};

// Hunts for a common projective zero of the hypersurface equation and
// all of its partial derivatives over F_{q^k}, k = 1..k_max.  A hit
// settles non-smoothness exactly; a miss is exact for plane curves once
// k_max >= (d-1)^2 (the singular subscheme is cut out by curves of
// degree d-1, so Bezout bounds the degree of its closed points) and a
// one-sided heuristic otherwise.
SmoothReport is_smooth_point_scan(const ProjVariety &V, int k_max,
                                  std::uint64_t cap = ff::kDefaultEnumCap);

} // namespace zetagcd::variety
