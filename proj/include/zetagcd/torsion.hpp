#pragma once
#include <optional>
#include <string>
#include <vector>

#include "zetagcd/bigint.hpp"
#include "zetagcd/errors.hpp"
#include "zetagcd/tower.hpp"

// Integer Smith normal form, torsion of cell-complex cohomology, and
// exact evaluators for the explicit torsion / Betti / prime-selection
// bounds, kept in tower form where they cannot be materialized.

namespace zetagcd::torsion {

struct IntMatrix {
    long rows = 0, cols = 0;
    std::vector<std::vector<Int>> a; // row-major

    static IntMatrix zero(long r, long c);
    static IntMatrix identity(long n);
    IntMatrix transpose() const;
    IntMatrix operator*(const IntMatrix &o) const; // SizeMismatch
    bool is_zero() const;
};

// nonzero invariant factors d_0 | d_1 | ..., all >= 1; fraction-free
// elimination with minimum-|pivot| selection
std::vector<Int> smith_normal_form(IntMatrix M);

struct CokerTorsion {
    Int order = 1;                // product of invariants > 1
    std::vector<Int> invariants;  // the invariant factors > 1
};
// torsion of coker(M: Z^cols -> Z^rows); when all entries lie in
// {-1,0,1} the order is checked against the min(rows!, cols!) bound
CokerTorsion torsion_of_coker(const IntMatrix &M);

struct CellComplex {
    std::vector<long> cells;           // cells per dimension, index = dim
    std::vector<IntMatrix> boundaries; // boundaries[i] = d_{i+1}: C_{i+1} -> C_i

    int dim() const { return (int)cells.size() - 1; }
    const IntMatrix &d(int i) const { return boundaries[i - 1]; } // 1 <= i <= dim
    void validate() const; // NotAComplex on shape mismatch or dd != 0
};

struct Cohomology {
    long betti = 0;
    std::vector<Int> torsion; // invariant factors > 1 of H^i(K; Z)
};
// H^i from the cochain complex; cross-checked against the homology route
// through universal coefficients (H^i torsion = H_{i-1} torsion)
Cohomology cohomology_torsion(const CellComplex &K, int i);

// cell count bound (2d)^{3^{N+1}} * m^{2^N} for a compact real algebraic
// subset of R^N cut out by m polynomials of degree <= d
tower::TowerValue cell_bound(int N, int d, const Int &m);

enum class BoundMode { RealAffine, ComplexProjective, Simple };

struct BoundReport {
    tower::TowerValue bound;
    // exact inequality steps verified along the way (Simple mode); each
    // entry records one certified comparison
    std::vector<std::string> chain;
};
// torsion-order bound for H^i of a variety with defining degree <= d:
//   RealAffine:        (cell_bound(N, d, binom(N+d, N)))!   for X in R^N
//   ComplexProjective: (cell_bound((N+1)^2, d, binom((N+1)^2+d, (N+1)^2)))!
//   Simple:            2^{d^{2^{3N^2}}}  (requires d >= 2, N >= 4),
//                      with the derivation chain re-verified exactly
BoundReport betti_torsion_bound(int N, int d, BoundMode mode);

struct PrimeSelection {
    Int ell = 0;              // exact path: least prime dividing no order
    bool exact_path = false;
    tower::TowerValue k = tower::TowerValue::integer(0);       // N * d^{2^{3N^2}}
    tower::TowerValue rosser = tower::TowerValue::integer(0);  // k^2
    tower::TowerValue ell_bound = tower::TowerValue::integer(0); // d^{2^{4N^2}}
    bool bound_confirmed = false;
    std::vector<std::string> chain;
};
// With torsion orders supplied: the least prime dividing none of them
// (every order must be >= 1).  Without: evaluates the prime-count bound
// k, the Rosser bound k^2, and confirms k^2 <= d^{2^{4N^2}} exactly
// (needs d >= 2).  The tower part runs in both paths when d >= 2.
PrimeSelection torsion_free_prime(const std::optional<std::vector<Int>> &orders,
                                  int d, int N);

// total Betti number bound N*d*(2d-1)^{2N+1}
Int milnor_bound(int N, int d);

} // namespace zetagcd::torsion
