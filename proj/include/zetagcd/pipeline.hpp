#pragma once
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "zetagcd/bigint.hpp"
#include "zetagcd/errors.hpp"
#include "zetagcd/groups.hpp"
#include "zetagcd/pencil.hpp"
#include "zetagcd/poly.hpp"
#include "zetagcd/tower.hpp"

// The gcd machinery run end to end: draw two smooth fibres of a pencil
// over F_Q, compute both zeta numerators, take their gcd over Q, compare
// against a known target, estimate the success probability over many
// seeded trials, evaluate the extension-degree thresholds, descend a
// pair of coprime-extension gcds to the base field, and measure trace
// equidistribution against the exact coset fractions.

namespace zetagcd::pipeline {

struct TrialRecord {
    std::uint64_t seed = 0;
    Int Q = 0;
    pencil::FibreParam u1, u2;
    poly::WeilPoly f1, f2; // fibre numerators over F_Q
    poly::RatPoly g;       // gcd(f1, f2), constant term 1
    bool has_target = false;
    bool success = false; // g == target; meaningful only with a target
    double wall_s = 0;
};

// One two-fibre trial.  u1 and u2 are drawn through seeds derived from
// the trial seed (independent draws, collisions allowed).  The pencil
// must have plane-curve fibres and a scanned locus.  A target, when
// supplied, is the expected common factor over F_Q with constant term 1;
// GroundTruthMismatchDegree if its degree exceeds both fibre numerators'.
TrialRecord gcd_trial(pencil::PencilDesc &P, const ff::FieldPtr &Q_desc,
                      std::uint64_t seed,
                      const std::optional<poly::IntPoly> &target = std::nullopt);

// 95% Wilson score interval for successes/trials
std::pair<double, double> wilson_interval(long successes, long trials);

struct SuccessEstimate {
    long successes = 0;
    long trials = 0;
    double fraction = 0;
    double lo = 0, hi = 0; // 95% Wilson score interval
    std::vector<TrialRecord> records; // in trial-index order
};

// trials independent gcd_trials with per-index derived seeds.  The
// default target 1 is the known middle factor for pencils on smooth
// hypersurface surfaces (simply connected), the intended desk scale.
SuccessEstimate
estimate_success(pencil::PencilDesc &P, const ff::FieldPtr &Q_desc, long trials,
                 std::uint64_t seed,
                 const std::optional<poly::IntPoly> &target = poly::IntPoly{1});

struct ThresholdReport {
    int D = 0, N = 0;
    Int q = 0;
    Int ell = 0; // the torsion-free prime the caller settled on
    // log2 of the proof's lower bound on Q, the exact nested product
    // 2^{8N^2} * N^2 * D^{4N} * ceil(log2 D); the rounding is upward so
    // the reported threshold never understates (exact for D a power of
    // two, and the D = 1 branch degenerates to 0)
    tower::TowerValue log2_bound = tower::TowerValue::integer(0);
    Int aux_rhs = 0;    // 2 D^{N+1}; the run needs q^w > this
    int aux_min_w = 0;  // least such w
    Int betti_bound = 0; // fibre middle-cohomology dimension bound
    int configured_w = 0; // desk-scale exponent actually used, 0 if none
};

// Proof-threshold arithmetic, kept side by side with the configured
// desk-scale exponent so a run can never pass one off as the other.
ThresholdReport threshold(int D, int N, const Int &q, const Int &ell,
                          int configured_w = 0);

// Runs one gcd trial at q^{w1} and one at q^{w2} (gcd(w1, w2) = 1,
// NotCoprimeExponents otherwise) and recovers the base polynomial from
// the two gcds; the result is verified exactly through the power map.
// NoConsistentMatching propagates when the two levels are inconsistent
// (a failed trial at one level) -- rerun with a fresh seed.
poly::WeilPoly descend(pencil::PencilDesc &P, const Int &q, int w1, int w2,
                       std::uint64_t seed);

struct EquidistReport {
    long samples = 0;
    long hits = 0;        // sampled trace residues landing in C
    double empirical = 0; // hits / samples
    long lambda = 0;      // Q mod ell, the multiplier class realized
    Int coset_hits = 0;   // #(C cap lambda-coset) by enumeration
    Int coset_size = 0;   // = #Sp(2, F_ell), the paper's denominator
    double exact_fraction = 0;
    double difference = 0; // |empirical - exact_fraction|
    groups::KatzBound katz;
    double sigma3 = 0; // 3 sqrt(p(1-p)/samples) at p = exact_fraction
    bool within = false; // difference <= katz + sigma3
    Int chi_U = 0;
    Int U_count = 0; // #U(F_Q)
};

// Samples fibres over F_Q, reduces each trace mod ell, and compares the
// membership frequency for the residue set C against the exact fraction
// of the (Q mod ell)-multiplier coset of GSp(2, F_ell) with trace in C.
// Needs plane-cubic fibres, ell an odd prime not dividing Q, and a
// complete nodal locus (for the Euler characteristic and #U).
EquidistReport equidistribution_check(pencil::PencilDesc &P, long ell,
                                      const ff::FieldPtr &Q_desc,
                                      const std::set<long> &C_spec,
                                      long samples, std::uint64_t seed);

} // namespace zetagcd::pipeline
