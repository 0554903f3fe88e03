#include "zetagcd/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "zetagcd/rng.hpp"
#include "zetagcd/torsion.hpp"
#include "zetagcd/variety.hpp"

namespace zetagcd::pipeline {

namespace {

void require_trial_ready(const pencil::PencilDesc &P) {
    if (P.fibre_dim != 1 || P.X.nvars != 4)
        throw InputError("gcd trials need a pencil of plane-curve fibres");
    if (P.scanned_k < 1 && !P.z_complete)
        throw InputError("scan the nodal locus before running trials");
}

ff::FieldPtr ext_of_base(const pencil::PencilDesc &P, int w) {
    const auto &F = P.X.F;
    return w == 1 ? F : ff::field_make(F->p, F->k * w, F->seed);
}

// how many times the trial field extends the pencil's base field
int ext_exponent(const pencil::PencilDesc &P, const ff::FieldPtr &E) {
    const auto &F = P.X.F;
    if (E->p != F->p || E->k % F->k != 0)
        throw FieldMismatch("the trial field does not extend the base field");
    return E->k / F->k;
}

} // namespace

TrialRecord gcd_trial(pencil::PencilDesc &P, const ff::FieldPtr &Q_desc,
                      std::uint64_t seed,
                      const std::optional<poly::IntPoly> &target) {
    require_trial_ready(P);
    ext_exponent(P, Q_desc);
    const auto start = std::chrono::steady_clock::now();

    TrialRecord r;
    r.seed = seed;
    r.Q = Q_desc->q();
    r.u1 = pencil::sample_smooth_fibre(P, Q_desc, derive_seed(seed, 0));
    r.u2 = pencil::sample_smooth_fibre(P, Q_desc, derive_seed(seed, 1));
    const int g = variety::genus_plane(P.D);
    r.f1 = variety::curve_numerator(pencil::fibre_equation(P, r.u1), g);
    r.f2 = variety::curve_numerator(pencil::fibre_equation(P, r.u2), g);
    r.g = poly::poly_gcd(r.f1.c, r.f2.c);

    if (target) {
        poly::IntPoly t = poly::itrim(*target);
        if (poly::ideg(t) < 0 || t[0] != 1)
            throw InputError("the target factor must have constant term 1");
        if (poly::ideg(t) > r.f1.degree() && poly::ideg(t) > r.f2.degree())
            throw GroundTruthMismatchDegree(
                "the target factor outgrows both fibre numerators");
        r.has_target = true;
        r.success = poly::to_rat(t) == r.g;
    }
    r.wall_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return r;
}

std::pair<double, double> wilson_interval(long successes, long trials) {
    if (trials < 1) throw InputError("the interval needs at least one trial");
    if (successes < 0 || successes > trials)
        throw InputError("successes must lie between 0 and the trial count");
    const double z = 1.959963984540054; // 95% two-sided normal quantile
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z, denom = 1 + z2 / n;
    const double centre = (p + z2 / (2 * n)) / denom;
    const double half =
        z / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

SuccessEstimate estimate_success(pencil::PencilDesc &P,
                                 const ff::FieldPtr &Q_desc, long trials,
                                 std::uint64_t seed,
                                 const std::optional<poly::IntPoly> &target) {
    if (trials < 1) throw InputError("at least one trial is needed");
    SuccessEstimate est;
    est.trials = trials;
    est.records.reserve(static_cast<std::size_t>(trials));
    for (long i = 0; i < trials; ++i) {
        est.records.push_back(gcd_trial(
            P, Q_desc, derive_seed(seed, static_cast<std::uint64_t>(i)),
            target));
        if (est.records.back().success) ++est.successes;
    }
    est.fraction = static_cast<double>(est.successes) / trials;
    std::tie(est.lo, est.hi) = wilson_interval(est.successes, trials);
    return est;
}

ThresholdReport threshold(int D, int N, const Int &q, const Int &ell,
                          int configured_w) {
    if (D < 1 || N < 1)
        throw InputError("the threshold needs degree and dimension >= 1");
    if (q < 2) throw InputError("the base size must be at least 2");
    ThresholdReport r;
    r.D = D;
    r.N = N;
    r.q = q;
    r.ell = ell;
    r.configured_w = configured_w;

    long cl2 = 0; // ceil(log2 D), the upward-rounded last factor
    while ((Int(1) << cl2) < D) ++cl2;
    using tower::TowerValue;
    TowerValue head = TowerValue::exp(2, TowerValue::integer(Int(8) * N * N),
                                      TowerValue::integer(Int(N) * N));
    TowerValue dpow = TowerValue::exp(Int(D), TowerValue::integer(4L * N));
    r.log2_bound = TowerValue::mul(TowerValue::mul(head, dpow),
                                   TowerValue::integer(cl2));

    r.aux_rhs = 2 * ipow(Int(D), static_cast<unsigned long>(N) + 1);
    Int qw = 1;
    while (qw <= r.aux_rhs) {
        qw *= q;
        ++r.aux_min_w;
    }
    r.betti_bound = torsion::milnor_bound(N, D);
    return r;
}

poly::WeilPoly descend(pencil::PencilDesc &P, const Int &q, int w1, int w2,
                       std::uint64_t seed) {
    require_trial_ready(P);
    if (q != P.X.F->q())
        throw InputError("descent must start from the pencil's base field");
    if (w1 < 1 || w2 < 1)
        throw InputError("extension exponents must be >= 1");
    if (std::gcd(w1, w2) != 1)
        throw NotCoprimeExponents("the two extension degrees must be coprime");
    TrialRecord t1 = gcd_trial(P, ext_of_base(P, w1), derive_seed(seed, 1));
    TrialRecord t2 = gcd_trial(P, ext_of_base(P, w2), derive_seed(seed, 2));
    poly::WeilPoly g1{poly::to_int_exact(t1.g),
                      ipow(q, static_cast<unsigned long>(w1)), 1};
    poly::WeilPoly g2{poly::to_int_exact(t2.g),
                      ipow(q, static_cast<unsigned long>(w2)), 1};
    return poly::recover_base(g1, w1, g2, w2, q, 1);
}

EquidistReport equidistribution_check(pencil::PencilDesc &P, long ell,
                                      const ff::FieldPtr &Q_desc,
                                      const std::set<long> &C_spec,
                                      long samples, std::uint64_t seed) {
    if (P.fibre_dim != 1 || P.X.nvars != 4 || P.D != 3)
        throw InputError("the equidistribution check needs plane-cubic fibres");
    if (!P.z_complete)
        throw InputError("complete the nodal locus before the check");
    if (samples < 1) throw InputError("at least one sample is needed");
    if (ell == P.X.F->p)
        throw InputError("the residue prime must not divide the field size");
    const int w = ext_exponent(P, Q_desc);

    EquidistReport rep;
    rep.samples = samples;
    const Int Q = Q_desc->q();
    rep.lambda = (Q % ell).convert_to<long>();

    std::set<long> C;
    for (long c : C_spec) C.insert(((c % ell) + ell) % ell);

    // the exact side: enumerate the similitude group, keep the lambda
    // coset, and count traces falling in C
    auto gsp = groups::make_group_spec(groups::Family::GSp, 2, ell);
    auto sp = groups::make_group_spec(groups::Family::Sp, 2, ell);
    for (const auto &M : groups::enumerate_group(gsp)) {
        auto lam = groups::preserves(gsp, M);
        if (!lam || *lam != rep.lambda) continue;
        rep.coset_size += 1;
        long tr = (M.at(0, 0) + M.at(1, 1)) % ell;
        if (C.count(tr)) rep.coset_hits += 1;
    }
    const Int sp_order = groups::group_order(sp);
    if (rep.coset_size != sp_order)
        throw std::runtime_error("a multiplier coset is not a coset of the "
                                 "isometry group");
    rep.exact_fraction =
        Rat(rep.coset_hits, sp_order).convert_to<double>();

    // the sampled side: trace residues of fibre numerators over F_Q
    for (long i = 0; i < samples; ++i) {
        auto u = pencil::sample_smooth_fibre(
            P, Q_desc, derive_seed(seed, static_cast<std::uint64_t>(i)));
        auto f = variety::curve_numerator(pencil::fibre_equation(P, u), 1);
        Int a = f.c.size() > 1 ? -f.c[1] : Int(0);
        long res = ((a % ell + ell) % ell).convert_to<long>();
        if (C.count(res)) ++rep.hits;
    }
    rep.empirical = static_cast<double>(rep.hits) / samples;
    rep.difference = std::abs(rep.empirical - rep.exact_fraction);

    rep.chi_U = pencil::euler_char_U(P);
    rep.U_count = pencil::count_smooth_params(P, w);
    rep.katz = groups::katz_error_bound(rep.chi_U, groups::group_order(gsp),
                                        P.X.F->q(), w, rep.U_count);
    const double p = rep.exact_fraction;
    rep.sigma3 = 3.0 * std::sqrt(p * (1 - p) / samples);
    rep.within =
        rep.difference <= rep.katz.value.convert_to<double>() + rep.sigma3;
    return rep;
}

} // namespace zetagcd::pipeline
