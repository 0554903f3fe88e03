#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "zetagcd/errors.hpp"
#include "zetagcd/pencil.hpp"
#include "zetagcd/rng.hpp"
#include "zetagcd/variety.hpp"

using namespace zetagcd;
using pencil::FibreClass;
using pencil::FibreParam;
using pencil::FibreReport;
using pencil::LinearForm;
using pencil::PencilDesc;
using pencil::Route;

namespace {

variety::Term mono(const ff::FieldPtr &F, std::vector<int> exp, long long c) {
    return {std::move(exp), F->from_int(Int(c))};
}

variety::ProjVariety fermat3(const ff::FieldPtr &F, int nvars) {
    variety::Equation eq;
    for (int i = 0; i < nvars; ++i) {
        std::vector<int> e(nvars, 0);
        e[i] = 3;
        eq.push_back(mono(F, std::move(e), 1));
    }
    return variety::make_variety(F, nvars, {eq});
}

LinearForm axis_form(const ff::FieldPtr &F, int nvars, int idx) {
    LinearForm l(nvars, F->zero());
    l[idx] = F->one();
    return l;
}

// classify through both exact routes and insist they agree
FibreReport both_routes(const variety::ProjVariety &C) {
    FibreReport s = pencil::classify_curve(C, Route::PointScan);
    FibreReport e = pencil::classify_curve(C, Route::Elimination);
    CHECK(s.cls == e.cls);
    CHECK(s.singular_points == e.singular_points);
    CHECK(s.witness_deg == e.witness_deg);
    CHECK_FALSE(s.heuristic);
    CHECK_FALSE(e.heuristic);
    return s;
}

variety::ProjVariety plane_curve(const ff::FieldPtr &F,
                                 std::vector<std::pair<std::vector<int>, long long>> terms) {
    variety::Equation eq;
    for (auto &[e, c] : terms) eq.push_back(mono(F, std::move(e), c));
    return variety::make_variety(F, 3, {eq});
}

} // namespace

TEST_CASE("fibre parameters normalize to leading one") {
    auto F = ff::field_make(5, 1);
    FibreParam t = pencil::make_param(F, F->from_int(2), F->from_int(4));
    CHECK(F->key(t.t0) == 1);
    CHECK(F->key(t.t1) == 2); // 4/2 mod 5

    FibreParam inf = pencil::make_param(F, F->zero(), F->from_int(3));
    CHECK(F->is_zero(inf.t0));
    CHECK(F->key(inf.t1) == 1);

    CHECK_THROWS_AS(pencil::make_param(F, F->zero(), F->zero()), BothZero);
    CHECK_THROWS_AS(pencil::make_param(F, ff::Coeffs{1, 2}, F->one()), SizeMismatch);
}

TEST_CASE("pencil construction validates its input") {
    auto F = ff::field_make(2, 1);
    auto X = fermat3(F, 4);
    LinearForm w = axis_form(F, 4, 3), x = axis_form(F, 4, 0);

    PencilDesc P = pencil::make_pencil(X, w, x);
    CHECK(P.fibre_dim == 1);
    CHECK(P.D == 3);
    CHECK(P.Z.empty());
    CHECK_FALSE(P.z_complete);

    CHECK_THROWS_AS(pencil::make_pencil(X, w, w), InputError);
    CHECK_THROWS_AS(pencil::make_pencil(X, w, LinearForm(4, F->zero())), ZeroVector);
    CHECK_THROWS_AS(pencil::make_pencil(X, w, LinearForm(3, F->one())), SizeMismatch);

    // proportional over a bigger field
    auto F5 = ff::field_make(5, 1);
    auto X5 = fermat3(F5, 4);
    LinearForm a = axis_form(F5, 4, 0);
    LinearForm b = a;
    for (auto &c : b) c = F5->mul(c, F5->from_int(2));
    CHECK_THROWS_AS(pencil::make_pencil(X5, a, b), InputError);

    // not a hypersurface / ambient space too small
    auto two = variety::make_variety(
        F, 4, {{mono(F, {1, 0, 0, 0}, 1)}, {mono(F, {0, 1, 0, 0}, 1)}});
    CHECK_THROWS_AS(pencil::make_pencil(two, w, x), InputError);
    CHECK_THROWS_AS(
        pencil::make_pencil(fermat3(F, 3), axis_form(F, 3, 0), axis_form(F, 3, 1)),
        InputError);

    // axis x = z = 0 of x^3 + w y^2 + y z^2 carries the binary form w y^2
    auto Xs = variety::make_variety(
        F5, 4,
        {{mono(F5, {3, 0, 0, 0}, 1), mono(F5, {0, 2, 0, 1}, 1),
          mono(F5, {0, 1, 2, 0}, 1)}});
    CHECK_THROWS_AS(
        pencil::make_pencil(Xs, axis_form(F5, 4, 0), axis_form(F5, 4, 2)),
        InputError);

    // over F_2 the axis {x = y, z = w} lies inside the Fermat cubic
    LinearForm xy(4, F->zero()), zw(4, F->zero());
    xy[0] = xy[1] = F->one();
    zw[2] = zw[3] = F->one();
    CHECK_THROWS_AS(pencil::make_pencil(X, xy, zw), DegenerateHyperplane);
}

TEST_CASE("fibre equations match hand substitution on the Fermat pencil") {
    auto F = ff::field_make(2, 1);
    PencilDesc P = pencil::make_pencil(fermat3(F, 4), axis_form(F, 4, 3),
                                       axis_form(F, 4, 0));

    auto exps_of = [](const variety::ProjVariety &C) {
        std::set<std::vector<int>> s;
        for (const auto &t : C.equations[0]) s.insert(t.exp);
        return s;
    };
    std::set<std::vector<int>> cubes = {{3, 0, 0}, {0, 3, 0}, {0, 0, 3}};

    // t = (1:0) drops w, t = (0:1) drops x: three cubes either way
    auto f10 = pencil::fibre_equation(P, pencil::make_param(F, F->one(), F->zero()));
    CHECK(f10.nvars == 3);
    CHECK(f10.degree == 3);
    CHECK(exps_of(f10) == cubes);
    auto f01 = pencil::fibre_equation(P, pencil::make_param(F, F->zero(), F->one()));
    CHECK(exps_of(f01) == cubes);

    // t = (1:1): w = x cancels the x^3 term in characteristic 2
    auto f11 = pencil::fibre_equation(P, pencil::make_param(F, F->one(), F->one()));
    CHECK(exps_of(f11) == std::set<std::vector<int>>{{0, 3, 0}, {0, 0, 3}});
    for (const auto &t : f11.equations[0]) CHECK(t.c == F->one());

    // an extension parameter keeps degree and variable count
    auto E4 = ff::field_make(2, 2, F->seed);
    auto fe = pencil::fibre_equation(P, pencil::make_param(E4, E4->one(), E4->gen()));
    CHECK(fe.nvars == 3);
    CHECK(fe.degree == 3);
    CHECK(fe.F->same(*E4));

    auto F3 = ff::field_make(3, 1);
    CHECK_THROWS_AS(
        pencil::fibre_equation(P, pencil::make_param(F3, F3->one(), F3->zero())),
        FieldMismatch);

    // a section that vanishes identically is reported, not swallowed
    PencilDesc bad;
    bad.X = variety::make_variety(F, 4, {{mono(F, {1, 0, 0, 1}, 1)}});
    bad.L0 = axis_form(F, 4, 0);
    bad.L1 = axis_form(F, 4, 1);
    bad.fibre_dim = 1;
    bad.D = 2;
    CHECK_THROWS_AS(
        pencil::fibre_equation(bad, pencil::make_param(F, F->one(), F->zero())),
        DegenerateHyperplane);
}

TEST_CASE("plane curve classification fixtures agree across routes") {
    auto F2 = ff::field_make(2, 1);
    auto F3 = ff::field_make(3, 1);
    auto F5 = ff::field_make(5, 1);

    // smooth: the Fermat cubic curve
    FibreReport r = both_routes(fermat3(F2, 3));
    CHECK(r.cls == FibreClass::Smooth);
    CHECK(r.singular_points == 0);

    // nodal cubic y^2 z = x^2 (x + z): unique node at (0:0:1)
    r = both_routes(plane_curve(F5, {{{0, 2, 1}, 1}, {{3, 0, 0}, -1}, {{2, 0, 1}, -1}}));
    CHECK(r.cls == FibreClass::Nodal);
    CHECK(r.singular_points == 1);
    CHECK(r.witness_deg == 1);
    CHECK(r.witness == std::vector<Int>{0, 0, 1});

    // cuspidal cubic y^2 z = x^3: degenerate quadratic part
    r = both_routes(plane_curve(F5, {{{0, 2, 1}, 1}, {{3, 0, 0}, -1}}));
    CHECK(r.cls == FibreClass::WorseThanNodal);
    CHECK(r.singular_points == 1);
    CHECK(r.witness == std::vector<Int>{0, 0, 1});

    // characteristic 2: the cross term decides nodality
    r = both_routes(plane_curve(F2, {{{0, 2, 1}, 1}, {{1, 1, 1}, 1}, {{3, 0, 0}, 1}}));
    CHECK(r.cls == FibreClass::Nodal);
    CHECK(r.singular_points == 1);
    r = both_routes(plane_curve(F2, {{{0, 2, 1}, 1}, {{3, 0, 0}, 1}, {{2, 0, 1}, 1}}));
    CHECK(r.cls == FibreClass::WorseThanNodal);
    CHECK(r.singular_points == 1);

    // coordinate triangle: three nodes
    r = both_routes(plane_curve(F5, {{{1, 1, 1}, 1}}));
    CHECK(r.cls == FibreClass::WorseThanNodal);
    CHECK(r.singular_points == 3);

    // (x^2 + y^2) z over F_3: a rational point and a conjugate pair
    r = both_routes(plane_curve(F3, {{{2, 0, 1}, 1}, {{0, 2, 1}, 1}}));
    CHECK(r.cls == FibreClass::WorseThanNodal);
    CHECK(r.singular_points == 2);
    CHECK(r.witness_deg == 1);
    CHECK(r.witness == std::vector<Int>{0, 0, 1});

    // (x+y+z)^3 over F_3: the singular locus is the whole support line
    r = both_routes(plane_curve(F3, {{{3, 0, 0}, 1}, {{0, 3, 0}, 1}, {{0, 0, 3}, 1}}));
    CHECK(r.cls == FibreClass::WorseThanNodal);
    CHECK(r.singular_points == -1);

    // lines are smooth
    r = both_routes(plane_curve(ff::field_make(7, 1),
                                {{{1, 0, 0}, 1}, {{0, 1, 0}, 1}, {{0, 0, 1}, 1}}));
    CHECK(r.cls == FibreClass::Smooth);
}

TEST_CASE("classification routes reject what they cannot certify") {
    auto F3 = ff::field_make(3, 1);
    auto quadric = variety::make_variety(
        F3, 4, {{mono(F3, {1, 1, 0, 0}, 1), mono(F3, {0, 0, 1, 1}, 1)}});
    CHECK_THROWS_AS(pencil::classify_curve(quadric, Route::PointScan), InputError);
    CHECK_THROWS_AS(pencil::classify_curve(quadric, Route::Elimination), InputError);
    FibreReport h = pencil::classify_curve(quadric, Route::Auto);
    CHECK(h.heuristic);
    CHECK(h.cls == FibreClass::Smooth);

    auto two = variety::make_variety(
        F3, 3, {{mono(F3, {1, 0, 0}, 1)}, {mono(F3, {0, 1, 0}, 1)}});
    CHECK_THROWS_AS(pencil::classify_curve(two), InputError);
}

TEST_CASE("random cubics classify identically through scan and elimination") {
    auto F3 = ff::field_make(3, 1);
    const std::vector<std::vector<int>> cubic_exps = {
        {3, 0, 0}, {2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {1, 1, 1},
        {1, 0, 2}, {0, 3, 0}, {0, 2, 1}, {0, 1, 2}, {0, 0, 3}};
    int smooth = 0, checked = 0;
    Rng rng(0xC1A551F7);
    while (checked < 40) {
        variety::Equation eq;
        for (const auto &e : cubic_exps) {
            long long c = static_cast<long long>(rng.below(3));
            if (c != 0) eq.push_back(mono(F3, std::vector<int>(e), c));
        }
        if (eq.empty()) continue;
        auto C = variety::make_variety(F3, 3, {eq});
        FibreReport r = both_routes(C);
        smooth += r.cls == FibreClass::Smooth ? 1 : 0;
        ++checked;
    }
    CHECK(smooth >= 1);
    CHECK(smooth < 40); // the sample must exercise singular classification too
}

TEST_CASE("Fermat pencil over F_2 fails the Lefschetz condition at t=(1:1)") {
    auto F = ff::field_make(2, 1);
    PencilDesc P = pencil::make_pencil(fermat3(F, 4), axis_form(F, 4, 3),
                                       axis_form(F, 4, 0));

    FibreReport r = pencil::classify_fibre(P, pencil::make_param(F, F->one(), F->one()));
    CHECK(r.cls == FibreClass::WorseThanNodal);
    CHECK(r.singular_points == 1);
    CHECK(r.witness == std::vector<Int>{1, 0, 0});

    CHECK_THROWS_AS(pencil::scan_nodal_locus(P, 1), NotLefschetz);
    REQUIRE(P.Z.size() == 1);
    CHECK(P.scanned_k == 1);
    CHECK_FALSE(P.Z[0].at_infinity);
    CHECK(P.Z[0].deg == 1);
    CHECK(P.Z[0].cls == FibreClass::WorseThanNodal);
    CHECK_FALSE(P.Z[0].nodal_verified);
    // minpoly y - 1 pins the parameter s = 1
    CHECK(P.Z[0].minpoly == fqpoly::Poly{F->one(), F->one()});

    CHECK(pencil::euler_char_U(P) == 1);
    CHECK(pencil::z_geometric(P) == 1);
    CHECK_THROWS_AS(pencil::count_smooth_params(P, 1), InputError);
}

TEST_CASE("quadric pencil: complete nodal locus and exact smooth counts") {
    auto F = ff::field_make(3, 1);
    auto X = variety::make_variety(
        F, 4, {{mono(F, {1, 1, 0, 0}, 1), mono(F, {0, 0, 1, 1}, 1)}});
    PencilDesc P = pencil::make_pencil(X, axis_form(F, 4, 0), axis_form(F, 4, 1));
    CHECK(P.D == 2);
    CHECK(pencil::z_generic_bound(P) == 3);
    CHECK(pencil::z_proof_bound(P) == 8);

    pencil::nodal_locus_complete(P);
    CHECK(P.z_complete);
    REQUIRE(P.Z.size() == 2);
    // t = (0:1) and t = (1:0) are the two rank-drop conics
    CHECK(P.Z[0].at_infinity);
    CHECK(P.Z[0].cls == FibreClass::Nodal);
    CHECK(P.Z[0].nodal_verified);
    CHECK_FALSE(P.Z[1].at_infinity);
    CHECK(P.Z[1].deg == 1);
    CHECK(P.Z[1].minpoly == fqpoly::Poly{F->zero(), F->one()}); // s = 0
    CHECK(P.Z[1].cls == FibreClass::Nodal);

    CHECK(pencil::z_geometric(P) == 2);
    CHECK(pencil::euler_char_U(P) == 0);
    CHECK(pencil::count_smooth_params(P, 1) == 2);
    CHECK(pencil::count_smooth_params(P, 2) == 8);

    // brute confirmation over F_9: classify every parameter directly
    auto E9 = ff::field_make(3, 2, F->seed);
    int smooth = 0;
    FibreReport ri = pencil::classify_fibre(P, pencil::make_param(E9, E9->zero(), E9->one()));
    smooth += ri.cls == FibreClass::Smooth ? 1 : 0;
    for (std::uint64_t j = 0; j < 9; ++j) {
        FibreParam t = pencil::make_param(E9, E9->one(), E9->unkey(Int(j)));
        smooth += pencil::classify_fibre(P, t).cls == FibreClass::Smooth ? 1 : 0;
    }
    CHECK(smooth == 8);
}

TEST_CASE("Fermat pencil over F_5: scan agrees with the elimination oracle") {
    auto F = ff::field_make(5, 1);
    auto X = fermat3(F, 4);

    PencilDesc P;
    bool found = false;
    for (std::uint64_t attempt = 0; attempt < 20 && !found; ++attempt) {
        Rng r(derive_seed(0xF3A5, attempt));
        LinearForm L0(4), L1(4);
        for (int i = 0; i < 4; ++i) {
            L0[i] = F->unkey(Int(r.below(5)));
            L1[i] = F->unkey(Int(r.below(5)));
        }
        try {
            PencilDesc cand = pencil::make_pencil(X, L0, L1);
            pencil::scan_nodal_locus(cand, 1);
            P = std::move(cand);
            found = true;
        } catch (const InputError &) {
        }
    }
    REQUIRE(found);

    CHECK(pencil::z_proof_bound(P) == 27); // D^(dim X + 1) = 3^3
    CHECK(pencil::z_generic_bound(P) == 12);
    CHECK(pencil::z_geometric(P) <= 12);
    CHECK(pencil::euler_char_U(P) == 2 - pencil::z_geometric(P));
    for (const auto &z : P.Z) {
        CHECK(z.cls == FibreClass::Nodal);
        CHECK(z.nodal_verified);
        CHECK(z.deg == 1);
    }

    // the scan's verdicts, parameter by parameter, against both exact routes
    std::set<Int> nodal_keys;
    bool nodal_inf = false;
    for (const auto &z : P.Z) {
        if (z.at_infinity)
            nodal_inf = true;
        else
            nodal_keys.insert(F->key(F->neg(z.minpoly[0])));
    }
    auto check_param = [&](const FibreParam &t, bool expect_singular) {
        FibreReport rs = pencil::classify_fibre(P, t, Route::PointScan);
        FibreReport re = pencil::classify_fibre(P, t, Route::Elimination);
        CHECK(rs.cls == re.cls);
        CHECK(rs.singular_points == re.singular_points);
        CHECK(rs.witness_deg == re.witness_deg);
        CHECK((rs.cls != FibreClass::Smooth) == expect_singular);
    };
    check_param(pencil::make_param(F, F->zero(), F->one()), nodal_inf);
    for (std::uint64_t j = 0; j < 5; ++j) {
        FibreParam t = pencil::make_param(F, F->one(), F->unkey(Int(j)));
        check_param(t, nodal_keys.count(Int(j)) > 0);
    }

    // projective scaling of the parameter cannot change the verdict
    for (long long lam = 2; lam <= 3; ++lam) {
        ff::Coeffs l = F->from_int(lam);
        FibreParam a = pencil::make_param(F, F->one(), F->from_int(3));
        FibreParam b = pencil::make_param(F, l, F->mul(l, F->from_int(3)));
        CHECK(pencil::classify_fibre(P, a).cls == pencil::classify_fibre(P, b).cls);
    }
}

TEST_CASE("smooth fibre sampling is deterministic and self-checking") {
    auto F = ff::field_make(2, 1);
    PencilDesc P = pencil::make_pencil(fermat3(F, 4), axis_form(F, 4, 3),
                                       axis_form(F, 4, 0));

    auto E64 = ff::field_make(2, 6, F->seed);
    FibreParam t = pencil::sample_smooth_fibre(P, E64, 7);
    CHECK(pencil::classify_fibre(P, t).cls == FibreClass::Smooth);
    FibreParam t2 = pencil::sample_smooth_fibre(P, E64, 7);
    CHECK(E64->key(t.t0) == E64->key(t2.t0));
    CHECK(E64->key(t.t1) == E64->key(t2.t1));

    FibreParam tb = pencil::sample_smooth_fibre(P, F, 1);
    CHECK(pencil::classify_fibre(P, tb).cls == FibreClass::Smooth);

    auto F3 = ff::field_make(3, 1);
    CHECK_THROWS_AS(pencil::sample_smooth_fibre(P, F3, 1), FieldMismatch);
    CHECK_THROWS_AS(pencil::sample_smooth_fibre(P, E64, 1, 0), InputError);
}

TEST_CASE("sampling a pencil that is singular in bulk exhausts its budget") {
    // X = (x+y+z+w)(x^2+y^2+zw): every hyperplane section splits off a line
    auto F = ff::field_make(2, 1);
    variety::Equation eq;
    eq.push_back(mono(F, {3, 0, 0, 0}, 1));
    eq.push_back(mono(F, {1, 2, 0, 0}, 1));
    eq.push_back(mono(F, {1, 0, 1, 1}, 1));
    eq.push_back(mono(F, {2, 1, 0, 0}, 1));
    eq.push_back(mono(F, {0, 3, 0, 0}, 1));
    eq.push_back(mono(F, {0, 1, 1, 1}, 1));
    eq.push_back(mono(F, {2, 0, 1, 0}, 1));
    eq.push_back(mono(F, {0, 2, 1, 0}, 1));
    eq.push_back(mono(F, {0, 0, 2, 1}, 1));
    eq.push_back(mono(F, {2, 0, 0, 1}, 1));
    eq.push_back(mono(F, {0, 2, 0, 1}, 1));
    eq.push_back(mono(F, {0, 0, 1, 2}, 1));
    auto X = variety::make_variety(F, 4, {eq});
    PencilDesc P = pencil::make_pencil(X, axis_form(F, 4, 0), axis_form(F, 4, 1));

    for (std::uint64_t j = 0; j < 2; ++j) {
        FibreParam t = pencil::make_param(F, F->one(), F->unkey(Int(j)));
        CHECK(pencil::classify_fibre(P, t).cls != FibreClass::Smooth);
    }
    CHECK_THROWS_AS(pencil::sample_smooth_fibre(P, F, 11, 30),
                    RejectionBudgetExceeded);
}

TEST_CASE("complete locus drives uniform sampling over F_64") {
    auto F = ff::field_make(2, 1);
    PencilDesc P = pencil::make_pencil(fermat3(F, 4), axis_form(F, 4, 3),
                                       axis_form(F, 4, 0));

    // the locus is recorded in full even though the pencil is not Lefschetz
    CHECK_THROWS_AS(pencil::nodal_locus_complete(P), NotLefschetz);
    CHECK(P.z_complete);
    CHECK(P.scanned_k == 12);

    auto E64 = ff::field_make(2, 6, F->seed);
    Int nU = pencil::count_smooth_params(P, 6);
    CHECK(nU > 0);

    // brute recount: classify all 65 parameters of P^1(F_64) directly
    std::set<std::uint64_t> smooth_keys;
    if (pencil::classify_fibre(P, pencil::make_param(E64, E64->zero(), E64->one()))
            .cls == FibreClass::Smooth)
        smooth_keys.insert(64);
    for (std::uint64_t j = 0; j < 64; ++j) {
        FibreParam t = pencil::make_param(E64, E64->one(), E64->unkey(Int(j)));
        if (pencil::classify_fibre(P, t).cls == FibreClass::Smooth)
            smooth_keys.insert(j);
    }
    REQUIRE(Int(smooth_keys.size()) == nU);

    // 500 draws with distinct seeds: support inside U, deviation < 5 sigma
    std::map<std::uint64_t, int> bins;
    const int ns = 500;
    for (int i = 0; i < ns; ++i) {
        FibreParam t = pencil::sample_smooth_fibre(P, E64, derive_seed(0x5A11, i));
        std::uint64_t key = E64->is_zero(t.t0)
                                ? 64
                                : static_cast<std::uint64_t>(E64->key(t.t1));
        bins[key] += 1;
    }
    int totalled = 0;
    for (const auto &[k, c] : bins) {
        CHECK(smooth_keys.count(k) == 1);
        totalled += c;
    }
    CHECK(totalled == ns);
    const double nu = static_cast<double>(smooth_keys.size());
    const double mean = ns / nu;
    const double sigma = std::sqrt(ns * (1.0 / nu) * (1.0 - 1.0 / nu));
    for (const auto &[k, c] : bins) CHECK(std::abs(c - mean) < 5.0 * sigma);
}
