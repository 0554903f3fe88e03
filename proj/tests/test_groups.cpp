#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "zetagcd/groups.hpp"
#include "zetagcd/rng.hpp"

using namespace zetagcd;
using namespace zetagcd::groups;

namespace {

long tmodl(long x, long ell) {
    long r = x % ell;
    return r < 0 ? r + ell : r;
}

long tpow(long a, long e, long ell) {
    long r = 1;
    a = tmodl(a, ell);
    while (e > 0) {
        if (e & 1) r = r * a % ell;
        a = a * a % ell;
        e >>= 1;
    }
    return r;
}

int tlegendre(long a, long ell) {
    a = tmodl(a, ell);
    if (a == 0) return 0;
    return tpow(a, (ell - 1) / 2, ell) == 1 ? 1 : -1;
}

MatModL tmat(int s, long ell, const std::vector<long> &entries) {
    MatModL m = MatModL::zero(s, ell);
    for (int i = 0; i < s * s; ++i) m.a[i] = tmodl(entries[i], ell);
    return m;
}

// independent similitude test: form the full product and scan all lambda
std::optional<long> preserves_oracle(const GroupSpec &spec, const MatModL &M) {
    int s = spec.s;
    long ell = spec.ell;
    std::vector<long> P(s * s, 0);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            long acc = 0;
            for (int k = 0; k < s; ++k)
                for (int l = 0; l < s; ++l)
                    acc = (acc + M.at(k, i) * spec.form_at(k, l) % ell * M.at(l, j)) % ell;
            P[i * s + j] = acc;
        }
    for (long lam = 1; lam < ell; ++lam) {
        bool ok = true;
        for (int t = 0; t < s * s && ok; ++t)
            ok = P[t] == lam * spec.form[t] % ell;
        if (ok) return lam;
    }
    return std::nullopt;
}

// det(T I - M) by the Leibniz permutation sum, then coefficient reversal:
// det(1 - T M) = T^s det(T^{-1} I - M)
std::vector<long> leibniz_charpoly_reversed(const MatModL &M) {
    int s = M.s;
    long ell = M.ell;
    std::vector<int> perm(s);
    for (int i = 0; i < s; ++i) perm[i] = i;
    std::vector<long> total(s + 1, 0);
    do {
        int inv = 0;
        for (int i = 0; i < s; ++i)
            for (int j = i + 1; j < s; ++j)
                if (perm[i] > perm[j]) ++inv;
        std::vector<long> term = {1};
        for (int i = 0; i < s; ++i) {
            long e0 = tmodl(-M.at(i, perm[i]), ell);
            long e1 = i == perm[i] ? 1 : 0;
            std::vector<long> nx(term.size() + 1, 0);
            for (std::size_t a = 0; a < term.size(); ++a) {
                nx[a] = (nx[a] + term[a] * e0) % ell;
                nx[a + 1] = (nx[a + 1] + term[a] * e1) % ell;
            }
            term = std::move(nx);
        }
        for (int i = 0; i <= s; ++i)
            total[i] = tmodl(total[i] + (inv % 2 == 0 ? term[i] : -term[i]), ell);
    } while (std::next_permutation(perm.begin(), perm.end()));
    std::vector<long> rev(s + 1, 0);
    for (int i = 0; i <= s; ++i) rev[s - i] = total[i];
    return rev;
}

long det_oracle(const MatModL &M) {
    auto f = leibniz_charpoly_reversed(M);
    // top coefficient of det(1 - TM) is (-1)^s det M
    return M.s % 2 == 0 ? f[M.s] : tmodl(-f[M.s], M.ell);
}

MatModL mat_inverse(const MatModL &M) {
    int s = M.s;
    long ell = M.ell;
    std::vector<std::vector<long>> aug(s, std::vector<long>(2 * s, 0));
    for (int i = 0; i < s; ++i) {
        for (int j = 0; j < s; ++j) aug[i][j] = M.at(i, j);
        aug[i][s + i] = 1;
    }
    for (int c = 0; c < s; ++c) {
        int piv = -1;
        for (int r = c; r < s; ++r)
            if (aug[r][c] != 0) {
                piv = r;
                break;
            }
        REQUIRE(piv >= 0);
        std::swap(aug[piv], aug[c]);
        long inv = tpow(aug[c][c], ell - 2, ell);
        for (int j = 0; j < 2 * s; ++j) aug[c][j] = aug[c][j] * inv % ell;
        for (int r = 0; r < s; ++r) {
            if (r == c || aug[r][c] == 0) continue;
            long f = aug[r][c];
            for (int j = 0; j < 2 * s; ++j)
                aug[r][j] = tmodl(aug[r][j] - f * aug[c][j], ell);
        }
    }
    MatModL out = MatModL::zero(s, ell);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) out.at(i, j) = aug[i][s + j];
    return out;
}

std::vector<long> basis_vec(int s, int i) {
    std::vector<long> v(s, 0);
    v[i] = 1;
    return v;
}

} // namespace

TEST_CASE("preserves: identities, scalars, and the product oracle") {
    auto sp = make_group_spec(Family::Sp, 2, 3);
    auto o3 = make_group_spec(Family::O, 3, 5);
    auto gsp = make_group_spec(Family::GSp, 4, 3);

    CHECK(preserves(sp, MatModL::identity(2, 3)) == 1);
    CHECK(preserves(o3, MatModL::identity(3, 5)) == 1);
    CHECK(preserves(gsp, MatModL::identity(4, 3)) == 1);

    // scalar c I is a similitude with multiplier c^2
    for (long c = 1; c < 5; ++c) {
        MatModL M = MatModL::zero(3, 5);
        for (int i = 0; i < 3; ++i) M.at(i, i) = c;
        auto got = preserves(make_group_spec(Family::GO, 3, 5), M);
        REQUIRE(got.has_value());
        CHECK(*got == c * c % 5);
    }

    // perturbed identity loses the form
    MatModL P = MatModL::identity(3, 5);
    P.at(0, 1) = 1;
    CHECK(!preserves(o3, P).has_value());

    // random matrices agree with the independent oracle
    Rng rng(411);
    for (int rep = 0; rep < 60; ++rep) {
        MatModL M = MatModL::zero(4, 3);
        for (long &x : M.a) x = (long)rng.below(3);
        CHECK(preserves(gsp, M) == preserves_oracle(gsp, M));
        MatModL N = MatModL::zero(3, 5);
        for (long &x : N.a) x = (long)rng.below(5);
        CHECK(preserves(o3, N) == preserves_oracle(o3, N));
    }

    CHECK_THROWS_AS(preserves(sp, MatModL::identity(4, 3)), SizeMismatch);
    CHECK_THROWS_AS(preserves(sp, MatModL::identity(2, 5)), SizeMismatch);
}

TEST_CASE("group_order closed forms") {
    CHECK(group_order(make_group_spec(Family::O, 3, 3)) == 48);
    CHECK(group_order(make_group_spec(Family::Sp, 2, 3)) == 24);
    CHECK(group_order(make_group_spec(Family::GSp, 2, 3)) == 48);
    CHECK(group_order(make_group_spec(Family::Sp, 4, 3)) == 51840);
    CHECK(group_order(make_group_spec(Family::O, 2, 5)) == 8);       // split
    CHECK(group_order(make_group_spec(Family::O, 2, 5, 2)) == 12);   // non-split
    CHECK(group_order(make_group_spec(Family::GO, 3, 5)) == 480);
    CHECK(group_order(make_group_spec(Family::GO, 2, 5)) == 32);
    CHECK(group_order(make_group_spec(Family::O, 1, 7)) == 2);
    CHECK(group_order(make_group_spec(Family::GO, 1, 7)) == 6);
    for (long ell : {3L, 5L, 7L})
        CHECK(group_order(make_group_spec(Family::Sp, 2, ell)) ==
              ell * (ell * ell - 1));
}

TEST_CASE("make_group_spec validation") {
    CHECK_THROWS_AS(make_group_spec(Family::Sp, 2, 2), CharTwo);
    CHECK_THROWS_AS(make_group_spec(Family::Sp, 2, 9), InputError);
    CHECK_THROWS_AS(make_group_spec(Family::Sp, 3, 5), InputError);
    CHECK_THROWS_AS(make_group_spec(Family::Sp, 2, 5, 1), InputError);
    CHECK_THROWS_AS(make_group_spec(Family::O, 2, 5, 5), InputError);
    CHECK_THROWS_AS(make_group_spec(Family::O, 0, 5), InputError);

    auto sp = make_group_spec(Family::Sp, 2, 3);
    CHECK(sp.form == std::vector<long>{0, 1, 2, 0});
    auto o2 = make_group_spec(Family::O, 2, 5);
    CHECK(o2.form == std::vector<long>{0, 1, 1, 0});
    auto o2n = make_group_spec(Family::O, 2, 5, 2);
    CHECK(o2n.form == std::vector<long>{1, 0, 0, 2});
    auto o3 = make_group_spec(Family::O, 3, 7, 3);
    CHECK(o3.form == std::vector<long>{1, 0, 0, 0, 1, 0, 0, 0, 3});
}

TEST_CASE("enumerate_group matches orders and the advertised multiplier") {
    for (long ell : {3L, 5L, 7L}) {
        auto els = enumerate_group(make_group_spec(Family::Sp, 2, ell));
        CHECK((long)els.size() == ell * (ell * ell - 1));
        std::set<MatModL> dedup(els.begin(), els.end());
        CHECK(dedup.size() == els.size());
    }

    auto o3 = make_group_spec(Family::O, 3, 3);
    auto els = enumerate_group(o3);
    CHECK(els.size() == 48);
    for (const auto &M : els) CHECK(preserves(o3, M) == 1);

    auto gsp = make_group_spec(Family::GSp, 2, 3);
    auto gels = enumerate_group(gsp);
    CHECK(gels.size() == 48);
    for (const auto &M : gels) {
        auto lam = preserves(gsp, M);
        REQUIRE(lam.has_value());
        CHECK(*lam >= 1);
        CHECK(*lam <= 2);
    }

    // GO(1) is all of F_ell^*
    auto go1 = enumerate_group(make_group_spec(Family::GO, 1, 5));
    CHECK(go1.size() == 4);

    // closure route (ell > scan threshold) against the closed form
    auto o2big = make_group_spec(Family::O, 2, 37);
    auto big = enumerate_group(o2big);
    CHECK(big.size() == 72);
    for (const auto &M : big) CHECK(preserves(o2big, M) == 1);

    CHECK_THROWS_AS(enumerate_group(make_group_spec(Family::Sp, 4, 13)),
                    EnumerationCapExceeded);
}

TEST_CASE("enumerate O(2, F_5) equals the brute matrix scan") {
    auto spec = make_group_spec(Family::O, 2, 5);
    std::set<MatModL> brute;
    for (long a = 0; a < 5; ++a)
        for (long b = 0; b < 5; ++b)
            for (long c = 0; c < 5; ++c)
                for (long d = 0; d < 5; ++d) {
                    MatModL M = tmat(2, 5, {a, b, c, d});
                    if (preserves_oracle(spec, M) == 1) brute.insert(M);
                }
    auto els = enumerate_group(spec);
    std::set<MatModL> got(els.begin(), els.end());
    CHECK(brute.size() == 8);
    CHECK(got == brute);
}

TEST_CASE("builtin generators reach the closed-form order at s > 2") {
    // the enumerate postcondition asserts closure size == group_order
    auto sp4 = make_group_spec(Family::Sp, 4, 3);
    CHECK(enumerate_group(sp4).size() == 51840);
    CHECK(enumerate_group(make_group_spec(Family::O, 3, 5)).size() == 240);
    CHECK(enumerate_group(make_group_spec(Family::GO, 2, 5, 2)).size() == 48);
}

TEST_CASE("sample_group: determinism, membership, empty cosets") {
    auto sp4 = make_group_spec(Family::Sp, 4, 3);
    MatModL a = sample_group(sp4, 1, 99);
    MatModL b = sample_group(sp4, 1, 99);
    CHECK(a == b);
    CHECK(preserves(sp4, a) == 1);
    MatModL c = sample_group(sp4, 1, 100);
    CHECK(!(a == c));

    auto gsp = make_group_spec(Family::GSp, 2, 5);
    for (long lam = 1; lam < 5; ++lam)
        CHECK(preserves(gsp, sample_group(gsp, lam, 7)) == lam);

    auto go3 = make_group_spec(Family::GO, 3, 5);
    CHECK(preserves(go3, sample_group(go3, 4, 5)) == 4);

    auto o3 = make_group_spec(Family::O, 3, 5);
    for (int i = 0; i < 10; ++i) {
        MatModL m = sample_group(o3, 1, 1000 + i);
        CHECK(preserves(o3, m) == 1);
    }

    CHECK_THROWS_AS(sample_group(sp4, 2, 1), EmptyCoset);
    CHECK_THROWS_AS(sample_group(o3, 4, 1), EmptyCoset);
    CHECK_THROWS_AS(sample_group(go3, 2, 1), EmptyCoset); // 2 not a square mod 5
    CHECK_THROWS_AS(sample_group(go3, 0, 1), InputError);
}

TEST_CASE("charpoly_reversed closed cases and the Leibniz oracle") {
    CHECK(charpoly_reversed(MatModL::identity(2, 5)) ==
          std::vector<long>{1, 3, 1}); // (1 - T)^2
    CHECK(charpoly_reversed(tmat(2, 7, {1, 0, 0, 3})) ==
          std::vector<long>{1, 3, 3}); // (1 - T)(1 - 3T)

    Rng rng(2024);
    for (int rep = 0; rep < 40; ++rep) {
        for (int s : {2, 3, 4}) {
            long ell = s == 3 ? 7 : 5;
            MatModL M = MatModL::zero(s, ell);
            for (long &x : M.a) x = (long)rng.below((std::uint64_t)ell);
            CHECK(charpoly_reversed(M) == leibniz_charpoly_reversed(M));
        }
    }

    // singular matrix: top coefficients vanish but lengths still agree
    MatModL Z = MatModL::zero(3, 5);
    CHECK(charpoly_reversed(Z) == std::vector<long>{1, 0, 0, 0});
}

TEST_CASE("similitude charpolys satisfy the lambda-reversal relation") {
    // a_{2r-i} = lambda^{r-i} a_i; exhaustive at (r, ell) = (1, 5)
    auto gsp2 = make_group_spec(Family::GSp, 2, 5);
    for (const auto &M : enumerate_group(gsp2)) {
        auto lam = preserves(gsp2, M);
        REQUIRE(lam.has_value());
        auto f = charpoly_reversed(M);
        for (int i = 0; i <= 1; ++i) // i > r mirrors these
            CHECK(f[2 - i] == tpow(*lam, 1 - i, 5) * f[i] % 5);
        CHECK(f[2] == *lam);
    }

    // sampled at (r, ell) = (2, 3)
    auto gsp4 = make_group_spec(Family::GSp, 4, 3);
    for (int rep = 0; rep < 10; ++rep)
        for (long lam = 1; lam <= 2; ++lam) {
            MatModL M = sample_group(gsp4, lam, 600 + rep);
            auto f = charpoly_reversed(M);
            for (int i = 0; i <= 2; ++i)
                CHECK(f[4 - i] == tpow(lam, 2 - i, 3) * f[i] % 3);
        }
}

TEST_CASE("coprime_fraction exact counts on SL2(F_3)") {
    auto sp = make_group_spec(Family::Sp, 2, 3);

    // f = (1 - T)^2: shares a factor iff trace == 2; nine such elements
    auto fr = coprime_fraction(sp, 1, {1, -2, 1});
    CHECK(fr.exact);
    CHECK(fr.numerator == 9);
    CHECK(fr.denominator == 24);
    CHECK(fr.sample_size == 0);
    CHECK(fr.value() == doctest::Approx(0.375));

    // f = 1 + T^2 is irreducible mod 3: hits are exactly the trace-0 class
    auto f2 = coprime_fraction(sp, 1, {1, 0, 1});
    CHECK(f2.exact);
    CHECK(f2.numerator == 6);
    CHECK(f2.denominator == 24);

    // degree 0: nothing to share
    auto f0 = coprime_fraction(sp, 1, {1});
    CHECK(f0.exact);
    CHECK(f0.numerator == 0);
    CHECK(f0.denominator == 24);

    CHECK_THROWS_AS(coprime_fraction(sp, 1, {0}), InputError);
    CHECK_THROWS_AS(coprime_fraction(sp, 1, {3, 6}), InputError); // 0 mod 3
    // degree-1 f divides some charpolys but is itself never one
    CHECK_THROWS_AS(coprime_fraction(sp, 1, {1, 1}), InputError);
    CHECK_THROWS_AS(coprime_fraction(sp, 2, {1, -2, 1}), EmptyCoset);
}

TEST_CASE("coprime_fraction self-consistency against the charpoly census") {
    // SL2(F_5): count via the enumerated charpoly multiset and
    // inclusion-exclusion over the factors of f = (1-2T)(1-3T)
    auto sp = make_group_spec(Family::Sp, 2, 5);
    std::map<std::vector<long>, long> census;
    for (const auto &M : enumerate_group(sp)) ++census[charpoly_reversed(M)];
    long total = 0;
    for (auto &[g, n] : census) total += n;
    CHECK(total == 120);

    auto eval = [](const std::vector<long> &g, long t, long ell) {
        long acc = 0, p = 1;
        for (long c : g) {
            acc = (acc + c * p) % ell;
            p = p * t % ell;
        }
        return acc;
    };
    // inverse roots 2 and 3 <-> polynomial roots 3 and 2
    long hit2 = 0, hit3 = 0, hitboth = 0;
    for (auto &[g, n] : census) {
        bool a = eval(g, 3, 5) == 0, b = eval(g, 2, 5) == 0;
        if (a) hit2 += n;
        if (b) hit3 += n;
        if (a && b) hitboth += n;
    }
    auto fr = coprime_fraction(sp, 1, {1, 0, 1}); // (1-2T)(1-3T) mod 5
    CHECK(fr.exact);
    CHECK(fr.numerator == hit2 + hit3 - hitboth);
    CHECK(fr.numerator == 30);
    CHECK(fr.denominator == 120);
}

TEST_CASE("fractions fall back to seeded sampling past the cap") {
    auto sp = make_group_spec(Family::Sp, 2, 251); // |Sp| = 15813000
    auto fr = coprime_fraction(sp, 1, {1, 0, 1}, 200, 42);
    CHECK(!fr.exact);
    CHECK(fr.sample_size == 200);
    CHECK(fr.denominator == 200);
    CHECK(fr.numerator >= 0);
    CHECK(fr.numerator <= 200);
    auto fr2 = coprime_fraction(sp, 1, {1, 0, 1}, 200, 42);
    CHECK(fr.numerator == fr2.numerator);

    auto dr = distinct_root_fraction(sp, 1, 200, 7);
    CHECK(!dr.exact);
    CHECK(dr.denominator == 200);
    // squarefree is the typical case at large ell
    CHECK(dr.value() > 0.9);

    CHECK_THROWS_AS(coprime_fraction(sp, 1, {1, 0, 1}, 0, 1), InputError);
}

TEST_CASE("distinct_root_fraction exact values") {
    // O(2, F_5) split: discriminant criterion trace^2 != 4 det as oracle
    auto spec = make_group_spec(Family::O, 2, 5);
    long sf = 0, n = 0;
    for (const auto &M : enumerate_group(spec)) {
        long tr = (M.at(0, 0) + M.at(1, 1)) % 5;
        long det = tmodl(M.at(0, 0) * M.at(1, 1) - M.at(0, 1) * M.at(1, 0), 5);
        if (tmodl(tr * tr - 4 * det, 5) != 0) ++sf;
        ++n;
    }
    CHECK(n == 8);
    auto dr = distinct_root_fraction(spec, 1);
    CHECK(dr.exact);
    CHECK(dr.numerator == sf);
    CHECK(dr.denominator == 8);

    // identity sits in the non-squarefree class, so the fraction is < 1
    CHECK(dr.value() < 1.0);

    auto o3 = make_group_spec(Family::O, 3, 3);
    auto d3 = distinct_root_fraction(o3, 1);
    CHECK(d3.exact);
    CHECK(d3.denominator == 48);
    CHECK(d3.numerator < 48);
}

TEST_CASE("transvections: fixed vectors, determinant, composition") {
    auto sp = make_group_spec(Family::Sp, 2, 7);
    MatModL T = transvection(sp, basis_vec(2, 0), 1);
    CHECK(T == tmat(2, 7, {1, -1, 0, 1}));
    CHECK(det_oracle(T) == 1);
    // <e1, e1> = 0 so e1 is fixed
    CHECK(T.at(0, 0) == 1);
    CHECK(T.at(1, 0) == 0);
    CHECK(T * T == transvection(sp, basis_vec(2, 0), 2));

    auto sp4 = make_group_spec(Family::Sp, 4, 3);
    std::vector<long> d = {1, 2, 0, 1};
    MatModL T4 = transvection(sp4, d, 1);
    CHECK(preserves(sp4, T4) == 1);
    CHECK(det_oracle(T4) == 1);
    CHECK(T4 * T4 == transvection(sp4, d, 2));
    // gamma orthogonal to delta stays put: delta itself qualifies
    std::vector<long> img(4, 0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            img[i] = (img[i] + T4.at(i, j) * d[j]) % 3;
    CHECK(img == d);

    CHECK_THROWS_AS(transvection(sp, {0, 0}, 1), ZeroVector);
    CHECK_THROWS_AS(transvection(sp, {1, 0, 0}, 1), SizeMismatch);
}

TEST_CASE("reflections: involutions of determinant -1") {
    auto o3 = make_group_spec(Family::O, 3, 5);
    for (auto v : {std::vector<long>{1, 0, 0}, {1, 1, 0}, {2, 1, 3}}) {
        MatModL R = reflection(o3, v);
        CHECK(preserves(o3, R) == 1);
        CHECK(det_oracle(R) == 4); // -1 mod 5
        CHECK(R * R == MatModL::identity(3, 5));
        // the axis flips
        std::vector<long> img(3, 0);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                img[i] = (img[i] + R.at(i, j) * tmodl(v[j], 5)) % 5;
        for (int i = 0; i < 3; ++i) CHECK(img[i] == tmodl(-v[i], 5));
    }

    auto o2 = make_group_spec(Family::O, 2, 5); // e1 isotropic for antidiag
    CHECK_THROWS_AS(reflection(o2, {1, 0}), InputError);
    CHECK_THROWS_AS(reflection(o2, {0, 0}), ZeroVector);
    CHECK_THROWS_AS(reflection(make_group_spec(Family::Sp, 2, 5), {1, 0}),
                    InputError);
}

TEST_CASE("subgroup_closure: spans, cyclic pieces, caps") {
    auto sp = make_group_spec(Family::Sp, 2, 3);
    auto gens = std::vector<MatModL>{transvection(sp, basis_vec(2, 0), 1),
                                     transvection(sp, basis_vec(2, 1), 1)};
    CHECK(subgroup_closure(sp, gens).size() == 24);

    auto sp5 = make_group_spec(Family::Sp, 2, 5);
    auto gens5 = std::vector<MatModL>{transvection(sp5, basis_vec(2, 0), 1),
                                      transvection(sp5, basis_vec(2, 1), 1)};
    CHECK(subgroup_closure(sp5, gens5).size() == 120);

    // a single transvection generates a cyclic group of order ell
    CHECK(subgroup_closure(sp5, {gens5[0]}).size() == 5);
    CHECK(subgroup_closure(sp, {}).size() == 1);

    CHECK_THROWS_AS(subgroup_closure(sp, gens, 10), ClosureCapExceeded);
    CHECK_THROWS_AS(subgroup_closure(sp, {MatModL::identity(4, 3)}),
                    SizeMismatch);
}

TEST_CASE("spinor norm: reflections, -I, homomorphism") {
    auto o3 = make_group_spec(Family::O, 3, 5);
    CHECK(spinor_norm(o3, MatModL::identity(3, 5)) == 1);
    // r_v has spinor norm q(v) mod squares
    CHECK(spinor_norm(o3, reflection(o3, {1, 0, 0})) == 1);  // q = 1
    CHECK(spinor_norm(o3, reflection(o3, {1, 1, 0})) == -1); // q = 2
    CHECK(spinor_norm(o3, reflection(o3, {0, 1, 1})) == -1);
    CHECK(spinor_norm(o3, reflection(o3, {1, 1, 1})) == -1); // q = 3

    auto o27 = make_group_spec(Family::O, 2, 7);
    CHECK(spinor_norm(o27, reflection(o27, {1, 1})) == 1);  // q = 2, square
    CHECK(spinor_norm(o27, reflection(o27, {1, 3})) == -1); // q = 6

    // -I in split O(2, F_5): explicit two-reflection factorization with
    // orthogonal axes (1,1) and (1,4), q-product 2 * 3 = 1, a square
    auto o2 = make_group_spec(Family::O, 2, 5);
    MatModL minusI = tmat(2, 5, {-1, 0, 0, -1});
    CHECK(reflection(o2, {1, 1}) * reflection(o2, {1, 4}) == minusI);
    CHECK(spinor_norm(o2, minusI) == tlegendre(2 * 3, 5));
    CHECK(spinor_norm(o2, minusI) == 1);

    // multiplicative on 100 random pairs
    for (int i = 0; i < 100; ++i) {
        MatModL g = sample_group(o3, 1, derive_seed(31337, 2 * i));
        MatModL h = sample_group(o3, 1, derive_seed(31337, 2 * i + 1));
        CHECK(spinor_norm(o3, g * h) == spinor_norm(o3, g) * spinor_norm(o3, h));
    }

    CHECK_THROWS_AS(spinor_norm(o3, tmat(3, 5, {1, 1, 0, 0, 1, 0, 0, 0, 1})),
                    NotIsometry);
    auto go3 = make_group_spec(Family::GO, 3, 5);
    CHECK_THROWS_AS(spinor_norm(go3, sample_group(go3, 4, 1)), NotIsometry);
    CHECK_THROWS_AS(spinor_norm(make_group_spec(Family::Sp, 2, 5),
                                MatModL::identity(2, 5)),
                    InputError);
}

TEST_CASE("classify_orth_subgroup and conjugation invariance") {
    auto o3 = make_group_spec(Family::O, 3, 5);
    MatModL rsq = reflection(o3, {1, 0, 0});           // spinor +1, det -1
    MatModL rns = reflection(o3, {1, 1, 0});           // spinor -1, det -1
    MatModL rot_plus = rsq * reflection(o3, {0, 1, 0}); // spinor +1, det +1
    MatModL rot_minus = rns * reflection(o3, {1, 0, 0}); // spinor -1, det +1

    CHECK(classify_orth_subgroup(o3, {rot_plus, rsq}) == OrthClass::SpinorKernel);
    CHECK(classify_orth_subgroup(o3, {rot_plus}) == OrthClass::SpinorKernel);
    CHECK(classify_orth_subgroup(o3, {}) == OrthClass::SpinorKernel);
    CHECK(classify_orth_subgroup(o3, {rns, rot_plus}) ==
          OrthClass::SpinorTimesDetKernel);
    CHECK(classify_orth_subgroup(o3, {rot_minus}) == OrthClass::Neither);
    CHECK(classify_orth_subgroup(o3, {rsq, rns}) == OrthClass::Neither);

    // conjugating the generator set never changes the class
    for (int i = 0; i < 5; ++i) {
        MatModL c = sample_group(o3, 1, 777 + i);
        MatModL ci = mat_inverse(c);
        REQUIRE(c * ci == MatModL::identity(3, 5));
        for (auto &gens : {std::vector<MatModL>{rot_plus, rsq},
                           std::vector<MatModL>{rns, rot_plus},
                           std::vector<MatModL>{rot_minus}}) {
            std::vector<MatModL> conj;
            for (const auto &g : gens) conj.push_back(c * g * ci);
            CHECK(classify_orth_subgroup(o3, conj) ==
                  classify_orth_subgroup(o3, gens));
        }
    }

    CHECK_THROWS_AS(
        classify_orth_subgroup(make_group_spec(Family::Sp, 2, 5), {}),
        InputError);
    auto go3 = make_group_spec(Family::GO, 3, 5);
    CHECK_THROWS_AS(classify_orth_subgroup(go3, {sample_group(go3, 4, 1)}),
                    NotIsometry);
}

TEST_CASE("katz_error_bound arithmetic") {
    Int U = (Int(1) << 20) - 11;
    auto b = katz_error_bound(-10, 48, 2, 20, U);
    CHECK(b.value == Rat(491520, 1048565)); // sqrt(2^20) = 1024 exactly
    CHECK(!b.vacuous);
    CHECK(b.value.convert_to<double>() == doctest::Approx(0.46876).epsilon(1e-4));

    auto z = katz_error_bound(0, 48, 2, 20, U);
    CHECK(z.value == 0);
    CHECK(!z.vacuous);

    auto v = katz_error_bound(1, 1000000, 4, 10, 1);
    CHECK(v.vacuous);
    CHECK(v.value >= 1);

    // odd powers: the rounded-up square root stays within 2^-64 above
    auto s = katz_error_bound(1, 1, 2, 1, 1);
    CHECK(s.value * s.value >= 2);
    CHECK(s.value * s.value < Rat(2) + Rat(1, Int(1) << 60));

    CHECK_THROWS_AS(katz_error_bound(1, 48, 2, 20, 0), InputError);
    CHECK_THROWS_AS(katz_error_bound(1, 0, 2, 20, 1), InputError);
    CHECK_THROWS_AS(katz_error_bound(1, 48, 1, 20, 1), InputError);
}
