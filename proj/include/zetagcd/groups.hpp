#pragma once
// Finite classical groups over F_ell (ell an odd prime): group orders,
// enumeration and seeded sampling, Picard-Lefschetz generators, spinor
// norms with subgroup classification, characteristic-polynomial fraction
// estimates, and the equidistribution error bound.

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "zetagcd/bigint.hpp"
#include "zetagcd/errors.hpp"

namespace zetagcd::groups {

enum class Family { Sp, GSp, O, GO };

// square matrix with entries reduced into [0, ell)
struct MatModL {
    int s = 0;
    long ell = 0;
    std::vector<long> a; // row-major, s*s entries

    long at(int i, int j) const { return a[(std::size_t)i * s + j]; }
    long &at(int i, int j) { return a[(std::size_t)i * s + j]; }
    static MatModL identity(int s, long ell);
    static MatModL zero(int s, long ell);
    MatModL operator*(const MatModL &o) const;
    bool operator==(const MatModL &o) const = default;
    bool operator<(const MatModL &o) const;
};

struct GroupSpec {
    Family family = Family::Sp;
    int s = 0;
    long ell = 0;
    std::vector<long> form; // s*s Gram matrix of the bilinear form

    bool symplectic() const {
        return family == Family::Sp || family == Family::GSp;
    }
    bool similitude_family() const {
        return family == Family::GSp || family == Family::GO;
    }
    long form_at(int i, int j) const { return form[(std::size_t)i * s + j]; }
};

// Default forms: standard symplectic [[0, I],[-I, 0]]; split (antidiagonal)
// symmetric for even s; the identity form for odd s. A nonzero delta
// replaces the last diagonal entry of an orthogonal form with delta,
// selecting diag(1,...,1,delta) (non-split variants for even s).
GroupSpec make_group_spec(Family family, int s, long ell, long delta = 0);

struct ClassFraction {
    Int numerator = 0;
    Int denominator = 1; // #Sp or #O, the isometry-group normalization
    bool exact = true;
    long sample_size = 0; // 0 when exact
    double value() const;
};

// multiplier lambda with M^T J M = lambda J, or nullopt
std::optional<long> preserves(const GroupSpec &spec, const MatModL &M);

Int group_order(const GroupSpec &spec);

constexpr long kEnumerationCap = 10000000;
constexpr int kMixingLength = 64;

// every element exactly once; scan for s <= 2, generator closure beyond
std::vector<MatModL> enumerate_group(const GroupSpec &spec);

// product of >= kMixingLength random built-in generators, pushed into the
// lambda-coset by a fixed multiplier representative
MatModL sample_group(const GroupSpec &spec, long lambda, std::uint64_t seed);

// det(1 - T M) over F_ell, constant-first, degree exactly M.s
std::vector<long> charpoly_reversed(const MatModL &M);

// fraction of the lambda-coset whose reversed charpoly shares a factor
// with f; exact when the group fits under the enumeration cap, otherwise
// Monte Carlo with the given sample count
ClassFraction coprime_fraction(const GroupSpec &spec, long lambda,
                               const std::vector<long> &f,
                               long samples = 20000, std::uint64_t seed = 1);

// fraction of the lambda-coset with squarefree reversed charpoly
ClassFraction distinct_root_fraction(const GroupSpec &spec, long lambda,
                                     long samples = 20000,
                                     std::uint64_t seed = 1);

// gamma |-> gamma + eps * <gamma, delta> * delta for the spec's form
MatModL transvection(const GroupSpec &spec, const std::vector<long> &delta,
                     long eps);

// classical reflection along a non-isotropic vector of a symmetric form
MatModL reflection(const GroupSpec &spec, const std::vector<long> &v);

std::set<MatModL> subgroup_closure(const GroupSpec &spec,
                                   const std::vector<MatModL> &gens,
                                   long cap = kEnumerationCap);

// +1 for the trivial square class, -1 otherwise, via a constructive
// reflection factorization (well-defined independently of the factorization)
int spinor_norm(const GroupSpec &spec, const MatModL &M);

enum class OrthClass { SpinorKernel, SpinorTimesDetKernel, Neither };

OrthClass classify_orth_subgroup(const GroupSpec &spec,
                                 const std::vector<MatModL> &gens);

struct KatzBound {
    Rat value;
    bool vacuous = false; // a bound >= 1 carries no information
};

// |chi_U| * G_order * sqrt(q^w) / U_count, square root rounded up so the
// bound stays a bound
KatzBound katz_error_bound(const Int &chi_U, const Int &G_order, const Int &q,
                           int w, const Int &U_count);

} // namespace zetagcd::groups
