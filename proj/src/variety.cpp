#include "zetagcd/variety.hpp"

#include <map>
#include <utility>

#include "zetagcd/fqpoly.hpp"
#include "zetagcd/gf2k.hpp"

namespace zetagcd::variety {

namespace {

using ff::Coeffs;
using ff::FieldDesc;
using ff::FieldPtr;

int term_degree(const Term &t) {
    int d = 0;
    for (int e : t.exp) d += e;
    return d;
}

// coefficients may arrive short or unreduced
Coeffs normalize_coeff(const FieldDesc &F, Coeffs c) {
    if (static_cast<int>(c.size()) > F.k)
        throw SizeMismatch("coefficient vector longer than the field degree");
    c.resize(F.k, 0);
    for (auto &e : c) {
        e %= F.p;
        if (e < 0) e += F.p;
    }
    return c;
}

// the equations with their coefficients moved into the degree-k extension
struct Extended {
    FieldPtr E;
    std::vector<Equation> eqs;
};

Extended extend(const ProjVariety &V, int k) {
    if (k < 1) throw InputError("extension degree must be at least 1");
    if (k == 1) return {V.F, V.equations};
    Extended X;
    X.E = ff::field_make(V.F->p, V.F->k * k, V.F->seed);
    auto emb = ff::embed(V.F, X.E, V.F->seed);
    X.eqs = V.equations;
    for (auto &eq : X.eqs)
        for (auto &t : eq) t.c = emb.map({V.F, t.c}).c;
    return X;
}

Coeffs eval_equation(const FieldDesc &E, const Equation &eq,
                     const std::vector<Coeffs> &pt) {
    Coeffs acc = E.zero();
    for (const auto &t : eq) {
        Coeffs v = t.c;
        for (std::size_t i = 0; i < pt.size(); ++i) {
            int e = t.exp[i];
            if (e == 0) continue;
            if (E.is_zero(pt[i])) {
                v = E.zero();
                break;
            }
            for (int j = 0; j < e; ++j) v = E.mul(v, pt[i]);
        }
        acc = E.add(acc, v);
    }
    return acc;
}

// Walks the canonical representatives of P^{nvars-1}(E) -- leading 1,
// free coordinates in key order with the last one fastest -- counting
// common zeros of eqs.  An empty equation vanishes identically.  With
// witness set, stops at the first hit and stores its coordinate keys.
long long scan_common_zeros(const FieldDesc &E, int nvars,
                            const std::vector<Equation> &eqs,
                            std::uint64_t cap, std::vector<Int> *witness,
                            std::vector<std::vector<Int>> *collect = nullptr) {
    Int size = 0, pw = 1;
    for (int i = 0; i < nvars; ++i) {
        size += pw;
        pw *= E.q();
    }
    if (size > Int(cap))
        throw EnumerationCapExceeded("projective scan needs " + size.str() +
                                     " points, over the cap");
    // nvars == 1 has no free coordinates, so Q is never consulted
    const std::uint64_t Q = nvars > 1 ? E.q_u64() : 0;
    long long hits = 0;
    std::vector<Coeffs> pt(nvars, E.zero());
    for (int lead = 0; lead < nvars; ++lead) {
        for (int i = 0; i < nvars; ++i) pt[i] = E.zero();
        pt[lead] = E.one();
        const int free_n = nvars - 1 - lead;
        std::vector<std::uint64_t> od(free_n, 0);
        for (;;) {
            bool zero_all = true;
            for (const auto &eq : eqs) {
                if (eq.empty()) continue;
                if (!E.is_zero(eval_equation(E, eq, pt))) {
                    zero_all = false;
                    break;
                }
            }
            if (zero_all) {
                if (witness) {
                    for (const auto &c : pt) witness->push_back(E.key(c));
                    return 1;
                }
                if (collect) {
                    std::vector<Int> keys(nvars);
                    for (int i = 0; i < nvars; ++i) keys[i] = E.key(pt[i]);
                    collect->push_back(std::move(keys));
                }
                ++hits;
            }
            int pos = free_n - 1;
            while (pos >= 0 && od[pos] + 1 == Q) {
                od[pos] = 0;
                pt[lead + 1 + pos] = E.zero();
                --pos;
            }
            if (pos < 0) break;
            ++od[pos];
            pt[lead + 1 + pos] = E.unkey(Int(od[pos]));
        }
    }
    return hits;
}

// distinct roots in E of a trimmed univariate polynomial: the degree of
// gcd(y^q - y, f), except that low degrees need no gcd at all
long long distinct_root_count(const FieldDesc &E, const fqpoly::Poly &f) {
    int d = fqpoly::deg(f);
    if (d <= 0) return 0;
    if (d == 1) return 1;
    auto y = fqpoly::monomial(E, 1, E.one());
    auto yq = fqpoly::powmod(E, y, E.q(), f);
    return fqpoly::deg(fqpoly::gcd(E, fqpoly::sub(E, yq, y), f));
}

// A plane curve f(x, y, z) splits into the affine chart z = 1 (y-degree
// coefficient polynomials in x), the line z = 0 with x = 1, and the
// remaining point (0 : 1 : 0).
struct Charts {
    std::vector<fqpoly::Poly> affine; // affine[j] = coeff of y^j in E[x]
    fqpoly::Poly infinity;            // f(1, y, 0)
    Coeffs corner;                    // f(0, 1, 0)
};

Charts build_charts(const FieldDesc &E, const Equation &eq) {
    Charts ch;
    ch.corner = E.zero();
    for (const auto &t : eq) {
        const int ex = t.exp[0], ey = t.exp[1], ez = t.exp[2];
        if (static_cast<int>(ch.affine.size()) <= ey) ch.affine.resize(ey + 1);
        auto &cx = ch.affine[ey];
        if (static_cast<int>(cx.size()) <= ex) cx.resize(ex + 1, E.zero());
        cx[ex] = E.add(cx[ex], t.c);
        if (ez == 0) {
            if (static_cast<int>(ch.infinity.size()) <= ey)
                ch.infinity.resize(ey + 1, E.zero());
            ch.infinity[ey] = E.add(ch.infinity[ey], t.c);
            if (ex == 0) ch.corner = E.add(ch.corner, t.c);
        }
    }
    for (auto &cx : ch.affine) cx = fqpoly::trim(E, cx);
    ch.infinity = fqpoly::trim(E, ch.infinity);
    return ch;
}

long long count_plane_curve(const FieldDesc &E, const Equation &eq,
                            std::uint64_t cap) {
    if (!E.q_fits_u64() || E.q_u64() > cap)
        throw EnumerationCapExceeded("curve line scan needs " + E.q().str() +
                                     " lines, over the cap");
    const std::uint64_t Q = E.q_u64();
    Charts ch = build_charts(E, eq);
    const int dy = static_cast<int>(ch.affine.size()) - 1;

    long long total = 0;
    if (E.p == 2 && E.k <= 30 && dy <= 3) {
        gf2k::Engine eng(E);
        std::vector<std::uint32_t> c[4];
        for (int j = 0; j <= dy; ++j) {
            c[j].resize(ch.affine[j].size());
            for (std::size_t i = 0; i < ch.affine[j].size(); ++i)
                c[j][i] = gf2k::Engine::pack(ch.affine[j][i]);
        }
        total += static_cast<long long>(eng.count_affine_cubic(c));
    } else {
        for (std::uint64_t x = 0; x < Q; ++x) {
            const Coeffs xv = E.unkey(Int(x));
            fqpoly::Poly f(dy + 1, E.zero());
            for (int j = 0; j <= dy; ++j)
                f[j] = fqpoly::eval(E, ch.affine[j], xv);
            f = fqpoly::trim(E, f);
            total += f.empty() ? static_cast<long long>(Q)
                               : distinct_root_count(E, f);
        }
    }
    total += ch.infinity.empty() ? static_cast<long long>(Q)
                                 : distinct_root_count(E, ch.infinity);
    if (E.is_zero(ch.corner)) ++total;
    return total;
}

} // namespace

ProjVariety make_variety(FieldPtr F, int nvars,
                         std::vector<Equation> equations, int dim_hint) {
    if (!F) throw InputError("make_variety: a field is required");
    if (nvars < 1)
        throw InputError("make_variety: need at least one coordinate");
    ProjVariety V;
    V.F = std::move(F);
    V.nvars = nvars;
    V.dim_hint = dim_hint;
    for (auto &eq : equations) {
        std::map<std::vector<int>, Coeffs> merged;
        int deg = -1;
        for (auto &t : eq) {
            if (static_cast<int>(t.exp.size()) != nvars)
                throw SizeMismatch("exponent vector length differs from nvars");
            for (int e : t.exp)
                if (e < 0) throw InputError("negative exponent");
            const int d = term_degree(t);
            if (deg == -1)
                deg = d;
            else if (d != deg)
                throw NotHomogeneous("terms of mixed total degree");
            Coeffs c = normalize_coeff(*V.F, std::move(t.c));
            auto it = merged.find(t.exp);
            if (it == merged.end())
                merged.emplace(std::move(t.exp), std::move(c));
            else
                it->second = V.F->add(it->second, c);
        }
        Equation clean;
        for (auto &[e, c] : merged)
            if (!V.F->is_zero(c)) clean.push_back({e, c});
        if (clean.empty()) throw ZeroInput("equation vanishes identically");
        V.degree *= deg;
        V.equations.push_back(std::move(clean));
    }
    return V;
}

int equation_degree(const ProjVariety &V, std::size_t i) {
    if (i >= V.equations.size())
        throw InputError("equation index out of range");
    return term_degree(V.equations[i].front());
}

long long count_points(const ProjVariety &V, int k, std::uint64_t cap) {
    if (!V.F) throw InputError("count_points: variety has no field");
    auto X = extend(V, k);
    if (V.nvars == 3 && V.equations.size() == 1)
        return count_plane_curve(*X.E, X.eqs.front(), cap);
    return scan_common_zeros(*X.E, V.nvars, X.eqs, cap, nullptr);
}

int genus_plane(int d) {
    if (d < 1) throw InputError("genus_plane: degree must be positive");
    return (d - 1) * (d - 2) / 2;
}

poly::WeilPoly curve_numerator(const ProjVariety &C, int g) {
    if (C.nvars != 3 || C.equations.size() != 1)
        throw InputError("curve_numerator: needs one equation in x, y, z");
    const int d = equation_degree(C, 0);
    if (g != genus_plane(d))
        throw InputError("curve_numerator: genus contradicts the degree");
    const Int q = C.F->q();
    poly::WeilPoly P{{Int(1)}, q, 1};
    if (g == 0) return P;

    CountTable N;
    std::vector<Int> s(g + 1); // power sums of the inverse roots
    for (int m = 1; m <= g; ++m) {
        N[m] = count_points(C, m);
        s[m] = ipow(q, m) + 1 - N[m];
    }
    // Newton: k e_k = sum_{i<=k} (-1)^{i-1} e_{k-i} s_i
    std::vector<Int> e(g + 1);
    e[0] = 1;
    for (int k = 1; k <= g; ++k) {
        Int acc = 0;
        for (int i = 1; i <= k; ++i) {
            Int t = e[k - i] * s[i];
            acc += i % 2 == 1 ? t : Int(-t);
        }
        if (acc % k != 0)
            throw NonIntegralCoefficient(
                "Newton step is fractional; is the curve singular?");
        e[k] = acc / k;
    }
    poly::IntPoly c(2 * g + 1);
    c[0] = 1;
    for (int i = 1; i <= g; ++i) c[i] = i % 2 == 1 ? Int(-e[i]) : e[i];
    for (int i = 0; i < g; ++i) c[2 * g - i] = ipow(q, g - i) * c[i];
    P.c = std::move(c);

    auto rep = poly::is_weil(P);
    if (!rep.ok)
        throw WeilCheckFailed("curve numerator is not pure: " + rep.reason);
    // while the next extension stays cheap, compare its predicted count
    // against a direct one; this is what catches a singular curve whose
    // low counts still fit a pure numerator
    if (ipow(q, g + 1) <= Int(1) << 16) {
        auto pm = poly::power_map(P, g + 1);
        const Int pred = ipow(q, g + 1) + 1 + pm.c.at(1);
        if (Int(count_points(C, g + 1)) != pred)
            throw WeilCheckFailed(
                "predicted count over the next extension is wrong");
    }
    return P;
}

ProjVariety singular_scheme(const ProjVariety &V) {
    if (V.equations.size() != 1)
        throw InputError("singular scheme needs a hypersurface");
    // the equation plus its partial derivatives, over the base field
    ProjVariety W = V;
    for (int j = 0; j < V.nvars; ++j) {
        Equation pd;
        for (const auto &t : V.equations.front()) {
            if (t.exp[j] == 0) continue;
            Coeffs c = V.F->mul(t.c, V.F->from_int(t.exp[j]));
            if (V.F->is_zero(c)) continue;
            Term u = t;
            --u.exp[j];
            u.c = std::move(c);
            pd.push_back(std::move(u));
        }
        W.equations.push_back(std::move(pd)); // may be identically zero
    }
    return W;
}

std::vector<std::vector<Int>> common_zeros(const ProjVariety &V, int k,
                                           std::uint64_t cap) {
    auto X = extend(V, k);
    std::vector<std::vector<Int>> pts;
    scan_common_zeros(*X.E, V.nvars, X.eqs, cap, nullptr, &pts);
    return pts;
}

SmoothReport is_smooth_point_scan(const ProjVariety &V, int k_max,
                                  std::uint64_t cap) {
    if (k_max < 1) throw InputError("k_max must be at least 1");
    const int d = equation_degree(V, 0);
    ProjVariety W = singular_scheme(V);

    SmoothReport rep;
    for (int k = 1; k <= k_max; ++k) {
        auto X = extend(W, k);
        std::vector<Int> wit;
        if (scan_common_zeros(*X.E, V.nvars, X.eqs, cap, &wit) > 0) {
            rep.smooth = false;
            rep.exact = true;
            rep.witness_k = k;
            rep.witness = std::move(wit);
            return rep;
        }
    }
    rep.smooth = true;
    rep.exact = V.nvars == 3 && d >= 1 && k_max >= (d - 1) * (d - 1);
    return rep;
}

} // namespace zetagcd::variety
