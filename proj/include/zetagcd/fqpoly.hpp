#pragma once
#include <vector>

#include "zetagcd/ff.hpp"

// Univariate polynomials over F_q with raw coefficient-vector entries.
// Internal workhorse shared by root finding, fibre classification and
// resultant elimination.  A polynomial is a vector of field elements,
// index = degree, trimmed so the back is nonzero (empty = zero poly).

namespace zetagcd::fqpoly {

using ff::Coeffs;
using ff::FieldDesc;

using Poly = std::vector<Coeffs>;

Poly trim(const FieldDesc &F, Poly f);
int deg(const Poly &f); // -1 for zero
bool is_zero(const Poly &f);
Poly zero();
Poly one(const FieldDesc &F);
Poly monomial(const FieldDesc &F, int d, const Coeffs &c);
Poly add(const FieldDesc &F, const Poly &a, const Poly &b);
Poly sub(const FieldDesc &F, const Poly &a, const Poly &b);
Poly mul(const FieldDesc &F, const Poly &a, const Poly &b);
Poly scal(const FieldDesc &F, const Coeffs &s, const Poly &a);
Poly monic(const FieldDesc &F, const Poly &a);
// division with remainder; divisor must be nonzero
std::pair<Poly, Poly> divmod(const FieldDesc &F, const Poly &a, const Poly &b);
Poly mod(const FieldDesc &F, const Poly &a, const Poly &b);
// exact division, throws std::runtime_error if remainder != 0
Poly exact_div(const FieldDesc &F, const Poly &a, const Poly &b);
Poly gcd(const FieldDesc &F, Poly a, Poly b); // monic gcd
Poly derivative(const FieldDesc &F, const Poly &a);
Coeffs eval(const FieldDesc &F, const Poly &a, const Coeffs &x);
Poly mulmod(const FieldDesc &F, const Poly &a, const Poly &b, const Poly &m);
Poly powmod(const FieldDesc &F, Poly base, Int e, const Poly &m);

// deg >= 1 and passes the Rabin test (x^{q^n} == x mod f, proper-power gcds trivial)
bool is_irreducible(const FieldDesc &F, const Poly &f);
// monic irreducible factors with multiplicities, canonically ordered by
// (degree, coefficient keys); distinct-degree splitting plus randomized
// equal-degree splitting, deterministic output for any seed
std::vector<std::pair<Poly, int>> factorize(const FieldDesc &F, Poly f,
                                            std::uint64_t seed = 1);
// the distinct roots of f lying in F itself, sorted by canonical key
std::vector<Coeffs> roots_in_field(const FieldDesc &F, const Poly &f,
                                   std::uint64_t seed = 1);

} // namespace zetagcd::fqpoly
