#include "doctest.h"

#include <vector>

#include "zetagcd/errors.hpp"
#include "zetagcd/ff.hpp"
#include "zetagcd/poly.hpp"
#include "zetagcd/rng.hpp"
#include "zetagcd/variety.hpp"

using namespace zetagcd;
using ff::FieldPtr;
using variety::Equation;
using variety::ProjVariety;
using variety::Term;

namespace {

Term mono(const FieldPtr &F, std::vector<int> exp, long c) {
    return {std::move(exp), F->from_int(Int(c))};
}

// the ten cubic monomials in x, y, z, in a fixed order
const std::vector<std::vector<int>> kCubicExps = {
    {3, 0, 0}, {2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {1, 1, 1},
    {1, 0, 2}, {0, 3, 0}, {0, 2, 1}, {0, 1, 2}, {0, 0, 3}};

ProjVariety cubic_from(const FieldPtr &F, const std::vector<long> &coef) {
    Equation eq;
    for (std::size_t i = 0; i < kCubicExps.size(); ++i)
        if (coef[i] % F->p != 0) eq.push_back(mono(F, kCubicExps[i], coef[i]));
    return variety::make_variety(F, 3, {eq});
}

// same zero set, but the duplicated equation steers count_points into
// the generic projective scan instead of the line-by-line curve path
ProjVariety doubled(const ProjVariety &C) {
    return variety::make_variety(C.F, 3, {C.equations[0], C.equations[0]});
}

// independent oracle: scan P^2(F_p) with plain integer arithmetic
long long brute_prime_plane(long long p,
                            const std::vector<std::vector<int>> &exps,
                            const std::vector<long> &coef) {
    auto eval = [&](long long x, long long y, long long z) {
        long long acc = 0;
        for (std::size_t i = 0; i < exps.size(); ++i) {
            long long m = ((coef[i] % p) + p) % p;
            for (int j = 0; j < exps[i][0]; ++j) m = m * x % p;
            for (int j = 0; j < exps[i][1]; ++j) m = m * y % p;
            for (int j = 0; j < exps[i][2]; ++j) m = m * z % p;
            acc = (acc + m) % p;
        }
        return acc;
    };
    long long n = 0;
    for (long long y = 0; y < p; ++y)
        for (long long z = 0; z < p; ++z)
            if (eval(1, y, z) == 0) ++n;
    for (long long z = 0; z < p; ++z)
        if (eval(0, 1, z) == 0) ++n;
    if (eval(0, 0, 1) == 0) ++n;
    return n;
}

ProjVariety fermat_cubic(const FieldPtr &F) {
    return variety::make_variety(
        F, 3,
        {{mono(F, {3, 0, 0}, 1), mono(F, {0, 3, 0}, 1), mono(F, {0, 0, 3}, 1)}});
}

} // namespace

TEST_CASE("projective spaces have geometric-series point counts") {
    for (long long p : {2, 3}) {
        auto F = ff::field_make(p, 1);
        for (int N = 0; N <= 3; ++N) {
            auto PN = variety::make_variety(F, N + 1, {});
            for (int k = 1; k <= 3; ++k) {
                Int expect = 0;
                for (int i = 0; i <= N; ++i) expect += ipow(Int(p), k * i);
                CHECK(Int(variety::count_points(PN, k)) == expect);
            }
        }
    }
    auto F2 = ff::field_make(2, 1);
    CHECK(variety::count_points(variety::make_variety(F2, 3, {}), 1) == 7);
}

TEST_CASE("pinned plane-curve counts") {
    auto F2 = ff::field_make(2, 1);
    auto C = fermat_cubic(F2);
    // over F_2 the Fermat cubic cuts out the line x + y + z = 0
    CHECK(variety::count_points(C, 1) == 3);
    std::vector<long> fc = {1, 0, 0, 0, 0, 0, 1, 0, 0, 1};
    CHECK(brute_prime_plane(2, kCubicExps, fc) == 3);
    CHECK(variety::count_points(C, 2) == 9);

    auto F3 = ff::field_make(3, 1);
    auto conic = variety::make_variety(
        F3, 3, {{mono(F3, {1, 0, 1}, 1), mono(F3, {0, 2, 0}, -1)}});
    CHECK(variety::count_points(conic, 1) == 4);  // q + 1
    CHECK(variety::count_points(conic, 2) == 10); // q^2 + 1
    CHECK(brute_prime_plane(3, {{1, 0, 1}, {0, 2, 0}}, {1, -1}) == 4);
}

TEST_CASE("quadric surface in P^3 has (q+1)^2 points") {
    auto F2 = ff::field_make(2, 1);
    auto Q = variety::make_variety(
        F2, 4,
        {{Term{{1, 1, 0, 0}, F2->from_int(1)}, Term{{0, 0, 1, 1}, F2->from_int(1)}}});
    CHECK(Q.degree == 2);
    CHECK(variety::count_points(Q, 1) == 9);
    CHECK(variety::count_points(Q, 2) == 25);
}

TEST_CASE("line-by-line counting matches a full scan and an integer oracle") {
    auto F2 = ff::field_make(2, 1);
    // every nonzero cubic over F_2
    for (unsigned m = 1; m < 1024; ++m) {
        std::vector<long> coef(10);
        for (int i = 0; i < 10; ++i) coef[i] = (m >> i) & 1;
        auto C = cubic_from(F2, coef);
        auto D = doubled(C);
        long long fast = variety::count_points(C, 1);
        CHECK(fast == brute_prime_plane(2, kCubicExps, coef));
        CHECK(fast == variety::count_points(D, 1));
        CHECK(variety::count_points(C, 2) == variety::count_points(D, 2));
    }
    // random cubics over F_3 and F_5 (the generic per-line route)
    Rng rng(424242);
    for (long long p : {3, 5}) {
        auto F = ff::field_make(p, 1);
        int n = p == 3 ? 200 : 60;
        for (int it = 0; it < n; ++it) {
            std::vector<long> coef(10);
            bool nonzero = false;
            for (auto &c : coef) {
                c = static_cast<long>(rng.below(p));
                nonzero = nonzero || c != 0;
            }
            if (!nonzero) continue;
            auto C = cubic_from(F, coef);
            long long fast = variety::count_points(C, 1);
            CHECK(fast == brute_prime_plane(p, kCubicExps, coef));
            CHECK(fast == variety::count_points(doubled(C), 1));
            if (it < 25)
                CHECK(variety::count_points(C, 2) ==
                      variety::count_points(doubled(C), 2));
        }
    }
    // a char-2 extension field as the base
    auto F4 = ff::field_make(2, 2);
    auto C = fermat_cubic(F4);
    CHECK(variety::count_points(C, 1) == 9); // same curve as F_2 base, k = 2
    CHECK(variety::count_points(C, 1) == variety::count_points(doubled(C), 1));
}

TEST_CASE("Fermat cubic zeta numerator over F_2") {
    auto F2 = ff::field_make(2, 1);
    auto C = fermat_cubic(F2);
    auto P = variety::curve_numerator(C, 1);
    CHECK(P.c == poly::IntPoly{1, 0, 2});
    CHECK(P.q == Int(2));
    CHECK(P.w == 1);
    CHECK_THROWS_AS(variety::curve_numerator(C, 0), InputError); // wrong genus
}

TEST_CASE("genus-0 conic has trivial numerator") {
    auto F3 = ff::field_make(3, 1);
    auto conic = variety::make_variety(
        F3, 3, {{mono(F3, {1, 0, 1}, 1), mono(F3, {0, 2, 0}, -1)}});
    auto P = variety::curve_numerator(conic, 0);
    CHECK(P.c == poly::IntPoly{1});
    CHECK_THROWS_AS(variety::curve_numerator(conic, 1), InputError);
    // not a plane curve at all
    auto F2 = ff::field_make(2, 1);
    auto P3 = variety::make_variety(F2, 4, {});
    CHECK_THROWS_AS(variety::curve_numerator(P3, 1), InputError);
}

TEST_CASE("singular cubics are exposed by the extension cross-check") {
    auto F5 = ff::field_make(5, 1);
    // nodal: y^2 z = x^3 + x^2 z
    auto nodal = variety::make_variety(
        F5, 3,
        {{mono(F5, {0, 2, 1}, 1), mono(F5, {3, 0, 0}, -1), mono(F5, {2, 0, 1}, -1)}});
    CHECK_THROWS_AS(variety::curve_numerator(nodal, 1), WeilCheckFailed);
    // cuspidal: y^2 z = x^3
    auto cusp = variety::make_variety(
        F5, 3, {{mono(F5, {0, 2, 1}, 1), mono(F5, {3, 0, 0}, -1)}});
    CHECK_THROWS_AS(variety::curve_numerator(cusp, 1), WeilCheckFailed);
}

TEST_CASE("random smooth cubics satisfy the Weil constraints") {
    Rng rng(2024);
    for (long long p : {3, 5}) {
        auto F = ff::field_make(p, 1);
        int found = 0;
        while (found < 8) {
            std::vector<long> coef(10);
            bool nonzero = false;
            for (auto &c : coef) {
                c = static_cast<long>(rng.below(p));
                nonzero = nonzero || c != 0;
            }
            if (!nonzero) continue;
            auto C = cubic_from(F, coef);
            // a singular plane cubic always has a singular closed point of
            // degree <= 3 (a unique one when irreducible, else component
            // intersections), so a sweep through k = 3 is decisive here
            if (!variety::is_smooth_point_scan(C, 3).smooth) continue;
            ++found;
            auto P = variety::curve_numerator(C, 1);
            Int a = P.c.at(1);
            CHECK(a * a <= Int(4 * p));
            Int N1(variety::count_points(C, 1));
            Int N2(variety::count_points(C, 2));
            CHECK(N1 == Int(p) + 1 + a);        // s_1 = -a
            CHECK(N2 == Int(p * p) + 1 - (a * a - 2 * p));
            // Weil band |N_k - (q^k + 1)| <= 2 q^{k/2}
            CHECK((N1 - p - 1) * (N1 - p - 1) <= Int(4 * p));
            CHECK((N2 - p * p - 1) * (N2 - p * p - 1) <= Int(4 * p * p));
        }
    }
}

TEST_CASE("smoothness scan: witnesses and exactness") {
    auto F5 = ff::field_make(5, 1);
    auto nodal = variety::make_variety(
        F5, 3,
        {{mono(F5, {0, 2, 1}, 1), mono(F5, {3, 0, 0}, -1), mono(F5, {2, 0, 1}, -1)}});
    auto rep = variety::is_smooth_point_scan(nodal, 1);
    CHECK_FALSE(rep.smooth);
    CHECK(rep.exact);
    CHECK(rep.witness_k == 1);
    CHECK(rep.witness == std::vector<Int>{0, 0, 1});

    auto F2 = ff::field_make(2, 1);
    rep = variety::is_smooth_point_scan(fermat_cubic(F2), 4);
    CHECK(rep.smooth);
    CHECK(rep.exact); // swept through (d-1)^2 = 4
    CHECK(rep.witness_k == 0);

    rep = variety::is_smooth_point_scan(fermat_cubic(F2), 2);
    CHECK(rep.smooth);
    CHECK_FALSE(rep.exact);

    // char 3 divides the exponents: x^3+y^3+z^3 = (x+y+z)^3 is a triple
    // line, singular everywhere along it
    auto F3 = ff::field_make(3, 1);
    rep = variety::is_smooth_point_scan(fermat_cubic(F3), 1);
    CHECK_FALSE(rep.smooth);
    CHECK(rep.witness == std::vector<Int>{1, 0, 2}); // first hit in scan order

    // a line has constant gradient
    auto F7 = ff::field_make(7, 1);
    auto line = variety::make_variety(F7, 3, {{mono(F7, {1, 0, 0}, 1)}});
    rep = variety::is_smooth_point_scan(line, 1);
    CHECK(rep.smooth);
    CHECK(rep.exact);

    // smooth quartic, sweep too shallow to certify
    auto quart = variety::make_variety(
        F5, 3,
        {{mono(F5, {4, 0, 0}, 1), mono(F5, {0, 4, 0}, 1), mono(F5, {0, 0, 4}, 1)}});
    rep = variety::is_smooth_point_scan(quart, 2);
    CHECK(rep.smooth);
    CHECK_FALSE(rep.exact);

    CHECK_THROWS_AS(variety::is_smooth_point_scan(doubled(nodal), 1), InputError);
    CHECK_THROWS_AS(variety::is_smooth_point_scan(nodal, 0), InputError);
}

TEST_CASE("genus_plane") {
    CHECK(variety::genus_plane(1) == 0);
    CHECK(variety::genus_plane(2) == 0);
    CHECK(variety::genus_plane(3) == 1);
    CHECK(variety::genus_plane(4) == 3);
    CHECK(variety::genus_plane(5) == 6);
    CHECK_THROWS_AS(variety::genus_plane(0), InputError);
    CHECK_THROWS_AS(variety::genus_plane(-2), InputError);
}

TEST_CASE("make_variety validates and normalizes") {
    auto F3 = ff::field_make(3, 1);
    CHECK_THROWS_AS(variety::make_variety(
                        F3, 3, {{mono(F3, {2, 0, 0}, 1), mono(F3, {0, 1, 0}, 1)}}),
                    NotHomogeneous);
    // x + 2x cancels
    CHECK_THROWS_AS(variety::make_variety(
                        F3, 3, {{mono(F3, {1, 0, 0}, 1), mono(F3, {1, 0, 0}, 2)}}),
                    ZeroInput);
    CHECK_THROWS_AS(variety::make_variety(F3, 3, {{mono(F3, {1, 0, 0}, 0)}}),
                    ZeroInput);
    CHECK_THROWS_AS(variety::make_variety(F3, 3, {{mono(F3, {1, 0}, 1)}}),
                    SizeMismatch);
    CHECK_THROWS_AS(variety::make_variety(F3, 3, {{mono(F3, {2, 1, -1}, 1)}}),
                    InputError);
    CHECK_THROWS_AS(variety::make_variety(F3, 0, {}), InputError);
    auto F9 = ff::field_make(3, 2);
    CHECK_THROWS_AS(
        variety::make_variety(F9, 2, {{Term{{1, 0}, ff::Coeffs{1, 2, 0, 1}}}}),
        SizeMismatch);

    // duplicate monomials merge: x^2 y + x^2 y == 2 x^2 y over F_3
    auto merged = variety::make_variety(
        F3, 3, {{mono(F3, {2, 1, 0}, 1), mono(F3, {2, 1, 0}, 1)}});
    auto direct = variety::make_variety(F3, 3, {{mono(F3, {2, 1, 0}, 2)}});
    REQUIRE(merged.equations[0].size() == 1);
    CHECK(merged.equations[0][0].c == direct.equations[0][0].c);
    CHECK(variety::count_points(merged, 2) == variety::count_points(direct, 2));

    // metadata
    CHECK(merged.degree == 3);
    CHECK(merged.dim_hint == -1);
    auto hinted = variety::make_variety(F3, 3, {{mono(F3, {1, 0, 0}, 1)}}, 1);
    CHECK(hinted.dim_hint == 1);
    CHECK(variety::equation_degree(hinted, 0) == 1);
    CHECK_THROWS_AS(variety::equation_degree(hinted, 1), InputError);
}

TEST_CASE("enumeration caps") {
    auto F2 = ff::field_make(2, 1);
    auto P3 = variety::make_variety(F2, 4, {});
    CHECK_THROWS_AS(variety::count_points(P3, 9), EnumerationCapExceeded);
    auto C = fermat_cubic(F2);
    CHECK_THROWS_AS(variety::count_points(C, 25), EnumerationCapExceeded);
    auto P2 = variety::make_variety(F2, 3, {});
    CHECK_THROWS_AS(variety::count_points(P2, 1, 3), EnumerationCapExceeded);
    CHECK_THROWS_AS(variety::count_points(C, 0), InputError);
}
