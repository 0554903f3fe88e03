#pragma once
#include <cstdint>
#include <vector>

#include "zetagcd/ff.hpp"
#include "zetagcd/fqpoly.hpp"
#include "zetagcd/variety.hpp"

// Pencils of hyperplane sections on a projective hypersurface: fibre
// equations over extension fields, classification of plane-curve fibres
// into smooth / nodal / worse-than-nodal, the nodal parameter locus Z
// inside P^1, and uniform rejection sampling of smooth fibres.
//
// Two independent classification routes are kept side by side: a point
// scan over extension fields (exact for plane curves once the sweep
// passes (D-1)^2, but capped at small fields) and resultant elimination
// with polynomial factoring (exact at any field size).  They are
// cross-checked against each other in the tests.

namespace zetagcd::pencil {

// linear form sum_i a_i x_i, one field coefficient per variable
using LinearForm = std::vector<ff::Coeffs>;

// a point (t0 : t1) of P^1(F_Q); the canonical representative has its
// first nonzero coordinate equal to 1
struct FibreParam {
    ff::FieldPtr E;
    ff::Coeffs t0, t1;
};

// normalizes to the canonical representative; throws BothZero
FibreParam make_param(ff::FieldPtr E, ff::Coeffs t0, ff::Coeffs t1);

enum class FibreClass { Smooth, Nodal, WorseThanNodal };

// a parameter with a singular fibre, stored as a closed point of P^1
// over the pencil's base field: either t = (0:1), or the Galois orbit
// of the roots of a monic irreducible in the affine coordinate t1/t0
struct NodalPoint {
    bool at_infinity = false;
    fqpoly::Poly minpoly; // over the base field; empty iff at_infinity
    int deg = 1;          // degree of the field of definition over the base
    FibreClass cls = FibreClass::Nodal;
    bool nodal_verified = false; // unique singular point, nondegenerate quadratic part
};

struct PencilDesc {
    variety::ProjVariety X; // hypersurface in P^{n+1}, one equation
    LinearForm L0, L1;
    int fibre_dim = 0;
    int D = 0; // common degree of the fibres
    std::vector<NodalPoint> Z;
    bool z_complete = false; // Z is the whole nodal locus, not a scan prefix
    int scanned_k = 0;       // P^1(F_{q^k}) exhausted for k <= scanned_k
};

// requires at least four variables (so fibres are curves or bigger),
// independent forms, and a smooth axis X with both forms zero
PencilDesc make_pencil(variety::ProjVariety X, LinearForm L0, LinearForm L1);

// the hyperplane section at t as a hypersurface in one fewer variable
// over t's field; deterministically eliminates the variable whose
// coefficient in t0 L0 + t1 L1 has the largest canonical key (ties go
// to the higher index); throws DegenerateHyperplane if X contains the
// hyperplane
variety::ProjVariety fibre_equation(const PencilDesc &P, const FibreParam &t);

struct FibreReport {
    FibreClass cls = FibreClass::Smooth;
    bool heuristic = false;   // fibre was not a plane curve
    int singular_points = 0;  // closed points, -1 when infinitely many
    int witness_deg = 0;      // extension degree of the witness field over t's field
    std::vector<Int> witness; // a singular point, canonical keys over that field
};

enum class Route {
    Auto,        // point scan when the sweep fits the cap, else elimination
    PointScan,   // extension-field scans up to degree (D-1)^2
    Elimination, // chart-by-chart resultants and factoring
};

// classifies a plane curve: Nodal means exactly one singular closed
// point, with nondegenerate quadratic part there (in characteristic 2
// the cross term of the local quadratic part must not vanish, the
// squared terms being perfect squares carry no rank)
FibreReport classify_curve(const variety::ProjVariety &C, Route route = Route::Auto);

// classify_curve of the fibre; non-curve fibres get the heuristic
// smooth/worse verdict from a shallow point scan
FibreReport classify_fibre(const PencilDesc &P, const FibreParam &t,
                           Route route = Route::Auto);

// classifies one representative per Frobenius orbit of P^1(F_{q^k}),
// k <= k_scan; records Z sorted by (degree, minpoly); after recording,
// throws NotLefschetz if some fibre was worse than nodal
void scan_nodal_locus(PencilDesc &P, int k_scan);

// the whole nodal locus: every singular parameter is a root of the
// pencil's discriminant, a binary form of degree 3(D-1)^2, so scanning
// closed points up to that degree is exhaustive; requires plane-curve
// fibres, characteristic not dividing D, and at least one smooth
// rational fibre (which certifies the discriminant is not identically
// zero); sets z_complete
void nodal_locus_complete(PencilDesc &P);

int z_geometric(const PencilDesc &P);     // sum of the degrees of Z
Int z_proof_bound(const PencilDesc &P);   // D^{N+1}, N = dim X
int z_generic_bound(const PencilDesc &P); // 3(D-1)^2

// #U(F_{q^w}) = q^w + 1 - #{nodal parameters rational over F_{q^w}};
// needs z_complete
Int count_smooth_params(const PencilDesc &P, int w);

// Euler characteristic 2 - #Z of the punctured line U (exact once Z is
// complete); needs a prior scan or nodal_locus_complete
int euler_char_U(const PencilDesc &P);

// draws t uniformly from P^1(F_Q) until the fibre at t is smooth;
// deterministic in the seed, throws RejectionBudgetExceeded after
// `budget` rejected draws; with z_complete each draw is a cheap
// membership test against Z, otherwise a full classification
FibreParam sample_smooth_fibre(PencilDesc &P, const ff::FieldPtr &E,
                               std::uint64_t seed, int budget = 1000);

} // namespace zetagcd::pencil
