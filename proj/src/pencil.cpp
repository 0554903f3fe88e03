#include "zetagcd/pencil.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <utility>

#include "zetagcd/errors.hpp"
#include "zetagcd/rng.hpp"

namespace zetagcd::pencil {

namespace {

using ff::Coeffs;
using ff::FieldDesc;
using ff::FieldPtr;
using fqpoly::Poly;
using variety::Equation;
using variety::ProjVariety;
using variety::Term;

// the canonical extension tower: same recipe as the point-counting scans,
// so witnesses and factor fields agree across modules
FieldPtr ext_field(const FieldPtr &E, int d) {
    if (d == 1) return E;
    return ff::field_make(E->p, E->k * d, E->seed);
}

// coefficient-wise lift along the canonical embedding (identity when the
// fields coincide)
struct Lift {
    FieldPtr small, big;
    std::optional<ff::Embedding> emb;

    Lift(FieldPtr s, FieldPtr b) : small(std::move(s)), big(std::move(b)) {
        if (small->k != big->k)
            emb.emplace(ff::embed(small, big, small->seed));
    }
    Coeffs up(const Coeffs &c) const {
        if (!emb) return c;
        return emb->map(ff::FieldElem(small, c)).c;
    }
    Poly up_poly(const Poly &f) const {
        if (!emb) return f;
        Poly out(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) out[i] = up(f[i]);
        return out;
    }
    Equation up_eq(const Equation &e) const {
        if (!emb) return e;
        Equation out = e;
        for (auto &t : out) t.c = up(t.c);
        return out;
    }
};

std::int64_t modinv_i64(std::int64_t a, std::int64_t p) {
    std::int64_t t = 0, nt = 1, r = p, nr = a % p;
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    return t < 0 ? t + p : t;
}

// F_p-linear section of a lift: writes big-field elements that lie in the
// image of the base back in base coordinates
struct Section {
    const Lift &l;
    std::vector<std::vector<std::int64_t>> cols; // image of each base basis vector

    explicit Section(const Lift &lift) : l(lift) {
        for (int i = 0; i < l.small->k; ++i) {
            Coeffs b = l.small->zero();
            b[i] = 1;
            cols.push_back(l.up(b));
        }
    }
    Coeffs down(const Coeffs &v) const {
        const std::int64_t p = l.small->p;
        const int rows = l.big->k, nc = l.small->k;
        std::vector<std::vector<std::int64_t>> m(
            rows, std::vector<std::int64_t>(nc + 1, 0));
        for (int r = 0; r < rows; ++r) {
            for (int c = 0; c < nc; ++c) m[r][c] = cols[c][r];
            m[r][nc] = v[r];
        }
        int row = 0;
        std::vector<int> where(nc, -1);
        for (int c = 0; c < nc && row < rows; ++c) {
            int piv = row;
            while (piv < rows && m[piv][c] == 0) ++piv;
            if (piv == rows) continue;
            std::swap(m[piv], m[row]);
            std::int64_t inv = modinv_i64(m[row][c], p);
            for (int j = c; j <= nc; ++j) m[row][j] = m[row][j] * inv % p;
            for (int r = 0; r < rows; ++r) {
                if (r == row || m[r][c] == 0) continue;
                std::int64_t f = m[r][c];
                for (int j = c; j <= nc; ++j)
                    m[r][j] = ((m[r][j] - f * m[row][j]) % p + p) % p;
            }
            where[c] = row++;
        }
        for (int r = 0; r < rows; ++r) {
            bool all0 = true;
            for (int c = 0; c < nc; ++c) all0 = all0 && m[r][c] == 0;
            if (all0 && m[r][nc] != 0)
                throw std::runtime_error("section: element not in the base field");
        }
        Coeffs out = l.small->zero();
        for (int c = 0; c < nc; ++c)
            if (where[c] >= 0) out[c] = m[where[c]][nc];
        return out;
    }
};

Coeffs norm_coeff(const FieldDesc &F, Coeffs c) {
    if (static_cast<int>(c.size()) > F.k)
        throw SizeMismatch("form coefficient longer than the field degree");
    c.resize(F.k, 0);
    for (auto &e : c) {
        e %= F.p;
        if (e < 0) e += F.p;
    }
    return c;
}

// ---- linear substitution -------------------------------------------------

// replaces x_piv by sum_{i != piv} r[i] x_i (r indexed by the original
// variables) and reindexes to nvars-1 variables
Equation substitute_linear(const FieldDesc &F, const Equation &eq, int nvars,
                           int piv, const std::vector<Coeffs> &r) {
    using Mono = std::map<std::vector<int>, Coeffs>;
    int maxe = 0;
    for (const Term &t : eq) maxe = std::max(maxe, t.exp[piv]);

    Mono lin;
    for (int i = 0; i < nvars; ++i) {
        if (i == piv || F.is_zero(r[i])) continue;
        std::vector<int> e(nvars - 1, 0);
        e[i < piv ? i : i - 1] = 1;
        lin[std::move(e)] = r[i];
    }
    std::vector<Mono> pw(maxe + 1);
    pw[0][std::vector<int>(nvars - 1, 0)] = F.one();
    for (int e = 1; e <= maxe; ++e)
        for (const auto &[pe, pc] : pw[e - 1])
            for (const auto &[le, lc] : lin) {
                std::vector<int> ne = pe;
                for (int i = 0; i < nvars - 1; ++i) ne[i] += le[i];
                auto it = pw[e].find(ne);
                if (it == pw[e].end())
                    pw[e][std::move(ne)] = F.mul(pc, lc);
                else
                    it->second = F.add(it->second, F.mul(pc, lc));
            }

    Mono acc;
    for (const Term &t : eq) {
        std::vector<int> base(nvars - 1);
        for (int i = 0, j = 0; i < nvars; ++i)
            if (i != piv) base[j++] = t.exp[i];
        for (const auto &[pe, pc] : pw[t.exp[piv]]) {
            std::vector<int> ne = base;
            for (int i = 0; i < nvars - 1; ++i) ne[i] += pe[i];
            Coeffs v = F.mul(t.c, pc);
            auto it = acc.find(ne);
            if (it == acc.end())
                acc[std::move(ne)] = std::move(v);
            else
                it->second = F.add(it->second, v);
        }
    }
    Equation out;
    for (auto &[e, c] : acc)
        if (!F.is_zero(c)) out.push_back({e, c});
    return out;
}

// ---- bivariate polynomials over E[y], indexed by the z-degree -------------

using Biv = std::vector<Poly>;

Biv biv_trim(const FieldDesc &F, Biv b) {
    for (auto &e : b) e = fqpoly::trim(F, e);
    while (!b.empty() && fqpoly::is_zero(b.back())) b.pop_back();
    return b;
}
int biv_deg(const Biv &b) { return static_cast<int>(b.size()) - 1; }
bool biv_zero(const Biv &b) { return b.empty(); }
int biv_ydeg(const Biv &b) {
    int d = -1;
    for (const auto &e : b) d = std::max(d, fqpoly::deg(e));
    return d;
}

Poly biv_content(const FieldDesc &F, const Biv &b) {
    Poly g = fqpoly::zero();
    for (const auto &e : b) g = fqpoly::gcd(F, g, e);
    return g;
}
Biv biv_pp(const FieldDesc &F, const Biv &b, const Poly &content) {
    if (fqpoly::deg(content) == 0) return b;
    Biv out(b.size());
    for (std::size_t i = 0; i < b.size(); ++i)
        out[i] = fqpoly::is_zero(b[i]) ? b[i] : fqpoly::exact_div(F, b[i], content);
    return out;
}

// an associate of the pseudo-remainder of A by B in z
Biv biv_prem(const FieldDesc &F, Biv A, const Biv &B) {
    const int db = biv_deg(B);
    const Poly &lb = B.back();
    while (biv_deg(A) >= db) {
        const int da = biv_deg(A);
        const Poly la = A.back();
        Biv out(da);
        for (int j = 0; j < da; ++j) {
            Poly t1 = fqpoly::mul(F, lb, A[j]);
            Poly t2 = (j >= da - db) ? fqpoly::mul(F, la, B[j - (da - db)])
                                     : fqpoly::zero();
            out[j] = fqpoly::sub(F, t1, t2);
        }
        A = biv_trim(F, std::move(out));
        if (biv_zero(A)) break;
    }
    return A;
}

Biv biv_gcd(const FieldDesc &F, Biv A, Biv B) {
    A = biv_trim(F, std::move(A));
    B = biv_trim(F, std::move(B));
    if (biv_zero(A)) return B;
    if (biv_zero(B)) return A;
    Poly ca = biv_content(F, A), cb = biv_content(F, B);
    Poly cg = fqpoly::gcd(F, ca, cb);
    A = biv_pp(F, A, ca);
    B = biv_pp(F, B, cb);
    if (biv_deg(A) < biv_deg(B)) std::swap(A, B);
    while (!biv_zero(B)) {
        Biv R = biv_prem(F, A, B);
        A = std::move(B);
        if (biv_zero(R)) {
            B.clear();
        } else {
            Poly cr = biv_content(F, R);
            B = biv_pp(F, R, cr);
        }
    }
    for (auto &e : A) e = fqpoly::mul(F, e, cg);
    return biv_trim(F, std::move(A));
}

// resultant with respect to z: Sylvester matrix over E[y], fraction-free
// Bareiss elimination (divisions are exact by construction)
Poly biv_res(const FieldDesc &F, Biv A, Biv B) {
    A = biv_trim(F, std::move(A));
    B = biv_trim(F, std::move(B));
    if (biv_zero(A) || biv_zero(B)) return fqpoly::zero();
    const int da = biv_deg(A), db = biv_deg(B);
    if (da == 0 && db == 0) return fqpoly::one(F);
    if (da == 0) {
        Poly r = fqpoly::one(F);
        for (int i = 0; i < db; ++i) r = fqpoly::mul(F, r, A[0]);
        return r;
    }
    if (db == 0) {
        Poly r = fqpoly::one(F);
        for (int i = 0; i < da; ++i) r = fqpoly::mul(F, r, B[0]);
        return r;
    }
    const int n = da + db;
    std::vector<std::vector<Poly>> m(n, std::vector<Poly>(n, fqpoly::zero()));
    for (int i = 0; i < db; ++i)
        for (int k = 0; k <= da; ++k) m[i][i + k] = A[da - k];
    for (int i = 0; i < da; ++i)
        for (int k = 0; k <= db; ++k) m[db + i][i + k] = B[db - k];

    Poly prev = fqpoly::one(F);
    for (int col = 0; col + 1 < n; ++col) {
        int piv = col;
        while (piv < n && fqpoly::is_zero(m[piv][col])) ++piv;
        if (piv == n) return fqpoly::zero();
        if (piv != col) std::swap(m[piv], m[col]); // sign irrelevant downstream
        for (int r = col + 1; r < n; ++r) {
            for (int c = col + 1; c < n; ++c) {
                Poly t = fqpoly::sub(F, fqpoly::mul(F, m[r][c], m[col][col]),
                                     fqpoly::mul(F, m[r][col], m[col][c]));
                m[r][c] = fqpoly::is_zero(t) ? t : fqpoly::exact_div(F, t, prev);
            }
            m[r][col] = fqpoly::zero();
        }
        prev = m[col][col];
    }
    return m[n - 1][n - 1];
}

// ---- affine charts of P^2 by leading nonzero coordinate --------------------

Biv chart0_of(const FieldDesc &F, const Equation &eq) {
    Biv b;
    for (const Term &t : eq) {
        if (static_cast<int>(b.size()) <= t.exp[2]) b.resize(t.exp[2] + 1);
        b[t.exp[2]] = fqpoly::add(F, b[t.exp[2]], fqpoly::monomial(F, t.exp[1], t.c));
    }
    return biv_trim(F, std::move(b));
}

Poly chart1_of(const FieldDesc &F, const Equation &eq) {
    Poly v = fqpoly::zero();
    for (const Term &t : eq)
        if (t.exp[0] == 0) v = fqpoly::add(F, v, fqpoly::monomial(F, t.exp[2], t.c));
    return v;
}

Coeffs chart2_val(const FieldDesc &F, const Equation &eq) {
    Coeffs acc = F.zero();
    for (const Term &t : eq)
        if (t.exp[0] == 0 && t.exp[1] == 0) acc = F.add(acc, t.c);
    return acc;
}

// ---- local quadratic part at a singular point ------------------------------

Coeffs powi(const FieldDesc &F, const Coeffs &a, int n) {
    return n == 0 ? F.one() : F.pow(a, Int(n));
}

// Nondegeneracy of the order-2 part of the dehomogenized equation at a
// singular point (first nonzero coordinate normalized to 1).  Writing the
// part as A u^2 + B uv + C v^2: in odd characteristic the Hessian test
// B^2 - 4AC != 0; in characteristic 2 the squared terms are perfect
// squares and carry no symmetric rank, so the node condition is the
// cross term B != 0 (B = 0 leaves a unibranch double point).
bool quad_nondegenerate(const FieldDesc &L, const Equation &eq,
                        const std::vector<Coeffs> &pt) {
    int lead = 0;
    while (lead < 3 && L.is_zero(pt[lead])) ++lead;
    if (lead == 3 || L.key(pt[lead]) != 1)
        throw std::runtime_error("quadratic test: point not normalized");
    const int i1 = lead == 0 ? 1 : 0, i2 = lead == 2 ? 1 : 2;
    const Coeffs &a = pt[i1], &b = pt[i2];

    Coeffs val = L.zero(), gx = L.zero(), gy = L.zero();
    Coeffs A = L.zero(), B = L.zero(), C = L.zero();
    for (const Term &t : eq) {
        const int i = t.exp[i1], j = t.exp[i2];
        val = L.add(val, L.mul(t.c, L.mul(powi(L, a, i), powi(L, b, j))));
        if (i >= 1)
            gx = L.add(gx, L.mul(L.from_int(Int(i)),
                                 L.mul(t.c, L.mul(powi(L, a, i - 1), powi(L, b, j)))));
        if (j >= 1)
            gy = L.add(gy, L.mul(L.from_int(Int(j)),
                                 L.mul(t.c, L.mul(powi(L, a, i), powi(L, b, j - 1)))));
        if (i >= 2)
            A = L.add(A, L.mul(L.from_int(Int(i) * (i - 1) / 2),
                               L.mul(t.c, L.mul(powi(L, a, i - 2), powi(L, b, j)))));
        if (i >= 1 && j >= 1)
            B = L.add(B, L.mul(L.from_int(Int(i) * j),
                               L.mul(t.c, L.mul(powi(L, a, i - 1), powi(L, b, j - 1)))));
        if (j >= 2)
            C = L.add(C, L.mul(L.from_int(Int(j) * (j - 1) / 2),
                               L.mul(t.c, L.mul(powi(L, a, i), powi(L, b, j - 2)))));
    }
    if (!L.is_zero(val) || !L.is_zero(gx) || !L.is_zero(gy))
        throw std::runtime_error("quadratic test at a non-singular point");
    if (L.p == 2) return !L.is_zero(B);
    Coeffs disc = L.sub(L.mul(B, B), L.mul(L.from_int(Int(4)), L.mul(A, C)));
    return !L.is_zero(disc);
}

// ---- singular closed points by elimination ---------------------------------

// a singular closed point located by the elimination route; charts follow
// the canonical leading-one normalization: chart 0 is x = 1 with affine
// coordinates (y, z), chart 1 is x = 0, y = 1, chart 2 is the point (0:0:1)
struct Hit {
    int deg = 1;
    int chart = 2;
    int ord = 0;
    Poly m; // chart 0: minimal polynomial of the y-coordinate over E
    Poly n; // factor giving the z-coordinate (over field(m) in chart 0, over E in chart 1)
    int da = 1, db = 1;
};

struct Realized {
    std::vector<Int> keys;
    int deg = 1;
    bool node = false;
};

Realized realize_hit(const FieldPtr &E, const Equation &eqE, const Hit &h) {
    Realized out;
    out.deg = h.deg;
    FieldPtr L;
    Equation eqL;
    std::vector<Coeffs> pt(3);
    if (h.chart == 2) {
        L = E;
        eqL = eqE;
        pt = {L->zero(), L->zero(), L->one()};
    } else if (h.chart == 1) {
        L = ext_field(E, h.db);
        Lift l(E, L);
        Coeffs eta = fqpoly::roots_in_field(*L, l.up_poly(h.n)).at(0);
        eqL = l.up_eq(eqE);
        pt = {L->zero(), L->one(), std::move(eta)};
    } else {
        FieldPtr K = ext_field(E, h.da);
        Lift lEK(E, K);
        Coeffs xi = fqpoly::roots_in_field(*K, lEK.up_poly(h.m)).at(0);
        L = ext_field(K, h.db);
        Lift lKL(K, L);
        Coeffs eta = fqpoly::roots_in_field(*L, lKL.up_poly(h.n)).at(0);
        eqL = lKL.up_eq(lEK.up_eq(eqE));
        pt = {L->one(), lKL.up(xi), std::move(eta)};
    }
    out.node = quad_nondegenerate(*L, eqL, pt);
    for (const auto &c : pt) out.keys.push_back(L->key(c));
    return out;
}

FibreReport report_infinite() {
    FibreReport r;
    r.cls = FibreClass::WorseThanNodal;
    r.singular_points = -1;
    return r;
}

FibreReport classify_elim(const ProjVariety &C) {
    const FieldPtr &E = C.F;
    const Equation &eq = C.equations[0];
    ProjVariety sing = variety::singular_scheme(C);

    // chart 0 (x = 1): bivariate elimination
    std::vector<Biv> H;
    for (const Equation &e : sing.equations) {
        Biv b = chart0_of(*E, e);
        if (!biv_zero(b)) H.push_back(std::move(b));
    }
    Biv G;
    for (const Biv &h : H) G = biv_gcd(*E, G, h);
    if (biv_deg(G) >= 1 || biv_ydeg(G) >= 1) return report_infinite();

    std::vector<Hit> hits;
    int ord = 0;

    std::vector<const Biv *> pz;
    std::vector<Poly> cands;
    for (const Biv &h : H) {
        if (biv_deg(h) >= 1)
            pz.push_back(&h);
        else
            cands.push_back(h[0]); // already a constraint on y alone
    }
    if (!pz.empty()) {
        std::size_t pi = 0;
        for (std::size_t i = 1; i < pz.size(); ++i)
            if (biv_deg(*pz[i]) < biv_deg(*pz[pi])) pi = i;
        const Biv &h0 = *pz[pi];
        std::vector<const Biv *> others;
        for (std::size_t i = 0; i < pz.size(); ++i)
            if (i != pi) others.push_back(pz[i]);
        for (const Biv *h : others) {
            Poly r = biv_res(*E, h0, *h);
            if (!fqpoly::is_zero(r)) cands.push_back(std::move(r));
        }
        if (cands.empty() && !others.empty()) {
            // every pairwise resultant collapsed (shared factors with the
            // pivot); eliminate against y-power combinations instead
            for (int s = 1; s <= 3 && cands.empty(); ++s) {
                Biv combo;
                for (std::size_t i = 0; i < others.size(); ++i) {
                    Biv shifted = *others[i];
                    Poly ym = fqpoly::monomial(*E, s * static_cast<int>(i), E->one());
                    for (auto &p : shifted) p = fqpoly::mul(*E, p, ym);
                    if (combo.size() < shifted.size()) combo.resize(shifted.size());
                    for (std::size_t j = 0; j < shifted.size(); ++j)
                        combo[j] = fqpoly::add(*E, combo[j], shifted[j]);
                }
                Poly r = biv_res(*E, h0, biv_trim(*E, std::move(combo)));
                if (!fqpoly::is_zero(r)) cands.push_back(std::move(r));
            }
            if (cands.empty())
                throw std::runtime_error("elimination: degenerate resultant system");
        }
        Poly U = fqpoly::zero();
        for (const Poly &c : cands) U = fqpoly::gcd(*E, U, c);
        if (fqpoly::deg(U) >= 1) {
            for (const auto &[m, mult] : fqpoly::factorize(*E, U)) {
                (void)mult;
                const int da = fqpoly::deg(m);
                FieldPtr K = ext_field(E, da);
                Lift lEK(E, K);
                Coeffs xi = fqpoly::roots_in_field(*K, lEK.up_poly(m)).at(0);
                Poly v = fqpoly::zero();
                bool anymem = false;
                for (const Biv &h : H) {
                    Poly w(h.size());
                    for (std::size_t j = 0; j < h.size(); ++j)
                        w[j] = fqpoly::eval(*K, lEK.up_poly(h[j]), xi);
                    w = fqpoly::trim(*K, std::move(w));
                    if (fqpoly::is_zero(w)) continue;
                    anymem = true;
                    v = fqpoly::gcd(*K, v, w);
                }
                if (!anymem) return report_infinite();
                if (fqpoly::deg(v) < 1) continue; // spurious elimination root
                for (const auto &[n, nm] : fqpoly::factorize(*K, v)) {
                    (void)nm;
                    hits.push_back({da * fqpoly::deg(n), 0, ord++, m, n, da,
                                    fqpoly::deg(n)});
                }
            }
        }
    }

    // chart 1 (x = 0, y = 1): univariate in z; members divisible by x
    // restrict to zero there and constrain nothing
    Poly v1 = fqpoly::zero();
    bool any1 = false;
    for (const Equation &e : sing.equations) {
        if (e.empty()) continue;
        Poly u = chart1_of(*E, e);
        if (fqpoly::is_zero(u)) continue;
        any1 = true;
        v1 = fqpoly::gcd(*E, v1, u);
    }
    if (!any1) return report_infinite(); // the whole line x = 0 is singular
    if (fqpoly::deg(v1) >= 1)
        for (const auto &[n, nm] : fqpoly::factorize(*E, v1)) {
            (void)nm;
            hits.push_back({fqpoly::deg(n), 1, ord++, {}, n, 1, fqpoly::deg(n)});
        }

    // chart 2: the point (0:0:1)
    bool at2 = true;
    for (const Equation &e : sing.equations)
        at2 = at2 && E->is_zero(chart2_val(*E, e));
    if (at2) hits.push_back({1, 2, ord++, {}, {}, 1, 1});

    FibreReport r;
    if (hits.empty()) return r;
    std::sort(hits.begin(), hits.end(), [](const Hit &a, const Hit &b) {
        if (a.deg != b.deg) return a.deg < b.deg;
        if (a.chart != b.chart) return a.chart < b.chart;
        return a.ord < b.ord;
    });
    Realized w = realize_hit(E, eq, hits[0]);
    r.singular_points = static_cast<int>(hits.size());
    r.witness = std::move(w.keys);
    r.witness_deg = w.deg;
    r.cls = (hits.size() == 1 && w.node) ? FibreClass::Nodal
                                         : FibreClass::WorseThanNodal;
    return r;
}

FibreReport classify_scan(const ProjVariety &C) {
    const FieldPtr &E = C.F;
    const int D = C.degree;
    const int kmax = std::max(1, (D - 1) * (D - 1));
    ProjVariety W = variety::singular_scheme(C);

    std::vector<long long> n(kmax + 1, 0), cd(kmax + 1, 0);
    std::vector<std::vector<std::vector<Int>>> pts(kmax + 1);
    for (int d = 1; d <= kmax; ++d) {
        pts[d] = variety::common_zeros(W, d);
        n[d] = static_cast<long long>(pts[d].size());
    }
    long long geom = 0, total = 0;
    for (int d = 1; d <= kmax; ++d) {
        long long s = n[d];
        for (int e = 1; e < d; ++e)
            if (d % e == 0) s -= e * cd[e];
        if (s % d != 0)
            throw std::runtime_error("closed point counts are inconsistent");
        cd[d] = s / d;
        geom += d * cd[d];
        total += cd[d];
    }
    if (geom > static_cast<long long>(kmax)) return report_infinite();

    FibreReport r;
    if (total == 0) return r;
    int dmin = 1;
    while (n[dmin] == 0) ++dmin;
    FieldPtr L = ext_field(E, dmin);
    Lift l(E, L);
    std::vector<Coeffs> pt;
    for (const Int &k : pts[dmin][0]) pt.push_back(L->unkey(k));
    bool node = quad_nondegenerate(*L, l.up_eq(C.equations[0]), pt);
    r.singular_points = static_cast<int>(total);
    r.witness = pts[dmin][0];
    r.witness_deg = dmin;
    r.cls = (total == 1 && node) ? FibreClass::Nodal : FibreClass::WorseThanNodal;
    return r;
}

} // namespace

// ---- parameters and pencil construction ------------------------------------

FibreParam make_param(FieldPtr E, Coeffs t0, Coeffs t1) {
    t0 = norm_coeff(*E, std::move(t0));
    t1 = norm_coeff(*E, std::move(t1));
    if (E->is_zero(t0) && E->is_zero(t1))
        throw BothZero("parameter (0:0) is not a point of the line");
    Coeffs s = E->inv(E->is_zero(t0) ? t1 : t0);
    Coeffs a = E->mul(t0, s), b = E->mul(t1, s);
    return {std::move(E), std::move(a), std::move(b)};
}

PencilDesc make_pencil(ProjVariety X, LinearForm L0, LinearForm L1) {
    if (X.equations.size() != 1)
        throw InputError("a pencil needs a hypersurface");
    if (X.nvars < 4)
        throw InputError("a pencil needs an ambient space of at least P^3");
    const FieldPtr F = X.F;
    const int nv = X.nvars;
    if (static_cast<int>(L0.size()) != nv || static_cast<int>(L1.size()) != nv)
        throw SizeMismatch("linear form length differs from the variable count");
    for (auto &c : L0) c = norm_coeff(*F, std::move(c));
    for (auto &c : L1) c = norm_coeff(*F, std::move(c));
    auto iszero = [&](const LinearForm &l) {
        for (const auto &c : l)
            if (!F->is_zero(c)) return false;
        return true;
    };
    if (iszero(L0) || iszero(L1)) throw ZeroVector("zero linear form");

    int p1 = 0;
    while (F->is_zero(L0[p1])) ++p1;
    Coeffs ratio = F->mul(L1[p1], F->inv(L0[p1]));
    LinearForm L1r(nv);
    for (int i = 0; i < nv; ++i) L1r[i] = F->sub(L1[i], F->mul(ratio, L0[i]));
    if (iszero(L1r)) throw InputError("the two forms span a single hyperplane");
    int p2 = 0;
    while (F->is_zero(L1r[p2])) ++p2;

    // restrict X to the axis {L0 = L1 = 0}: solve for x_{p1}, then x_{p2}
    std::vector<Coeffs> r1(nv, F->zero());
    Coeffs inv1 = F->inv(L0[p1]);
    for (int i = 0; i < nv; ++i)
        if (i != p1) r1[i] = F->neg(F->mul(inv1, L0[i]));
    Equation e1 = substitute_linear(*F, X.equations[0], nv, p1, r1);

    const int p2r = p2 < p1 ? p2 : p2 - 1;
    std::vector<Coeffs> r2(nv - 1, F->zero());
    Coeffs inv2 = F->inv(L1r[p2]);
    for (int i = 0, j = 0; i < nv; ++i) {
        if (i == p1) continue;
        if (i != p2) r2[j] = F->neg(F->mul(inv2, L1r[i]));
        ++j;
    }
    Equation e2 = substitute_linear(*F, e1, nv - 1, p2r, r2);
    if (e2.empty())
        throw DegenerateHyperplane("the axis lies inside the hypersurface");

    ProjVariety axis = variety::make_variety(F, nv - 2, {e2});
    const int D = X.degree;
    const int k_ax = nv - 2 == 2 ? D : (nv - 2 == 3 ? (D - 1) * (D - 1) : 2);
    variety::SmoothReport rep = variety::is_smooth_point_scan(axis, k_ax);
    if (!rep.smooth)
        throw InputError("the axis of the pencil is singular");

    PencilDesc P;
    P.X = std::move(X);
    P.L0 = std::move(L0);
    P.L1 = std::move(L1);
    P.fibre_dim = nv - 3;
    P.D = D;
    return P;
}

variety::ProjVariety fibre_equation(const PencilDesc &P, const FibreParam &t) {
    const FieldPtr &F = P.X.F;
    const FieldPtr &E = t.E;
    if (E->p != F->p || E->k % F->k != 0)
        throw FieldMismatch("parameter field does not extend the base");
    FibreParam tc = make_param(E, t.t0, t.t1);

    Lift l(F, E);
    Equation eqE = l.up_eq(P.X.equations[0]);
    const int nv = P.X.nvars;
    std::vector<Coeffs> M(nv);
    for (int i = 0; i < nv; ++i)
        M[i] = E->add(E->mul(tc.t0, l.up(P.L0[i])), E->mul(tc.t1, l.up(P.L1[i])));

    int piv = -1;
    Int best = -1;
    for (int i = 0; i < nv; ++i) {
        Int k = E->key(M[i]);
        if (k != 0 && k >= best) {
            best = k;
            piv = i;
        }
    }
    if (piv < 0) throw InputError("hyperplane form vanished");

    std::vector<Coeffs> r(nv, E->zero());
    Coeffs inv = E->inv(M[piv]);
    for (int i = 0; i < nv; ++i)
        if (i != piv) r[i] = E->neg(E->mul(inv, M[i]));
    Equation sub = substitute_linear(*E, eqE, nv, piv, r);
    if (sub.empty())
        throw DegenerateHyperplane("the hyperplane section vanished identically");
    return variety::make_variety(E, nv - 1, {sub}, P.fibre_dim);
}

// ---- classification ---------------------------------------------------------

FibreReport classify_curve(const ProjVariety &C, Route route) {
    if (C.equations.size() != 1)
        throw InputError("classification needs a hypersurface");
    if (C.degree < 1)
        throw InputError("classification needs a positive-degree equation");
    if (C.nvars != 3) {
        if (route != Route::Auto)
            throw InputError("exact classification routes need a plane curve");
        variety::SmoothReport rep = variety::is_smooth_point_scan(C, 2);
        FibreReport r;
        r.heuristic = true;
        if (!rep.smooth) {
            r.cls = FibreClass::WorseThanNodal; // conservative: not verified nodal
            r.singular_points = 1;
            r.witness = rep.witness;
            r.witness_deg = rep.witness_k;
        }
        return r;
    }
    if (C.degree == 1) return {}; // lines are smooth
    if (route == Route::Auto) {
        const int mmax = (C.degree - 1) * (C.degree - 1);
        Int sweep = ipow(C.F->q(), static_cast<unsigned long>(2 * mmax)) +
                    ipow(C.F->q(), static_cast<unsigned long>(mmax)) + 1;
        route = sweep <= Int(ff::kDefaultEnumCap) ? Route::PointScan
                                                  : Route::Elimination;
    }
    return route == Route::PointScan ? classify_scan(C) : classify_elim(C);
}

FibreReport classify_fibre(const PencilDesc &P, const FibreParam &t, Route route) {
    return classify_curve(fibre_equation(P, t), route);
}

// ---- the nodal locus ---------------------------------------------------------

namespace {

bool zp_less(const FieldDesc &F, const NodalPoint &a, const NodalPoint &b) {
    if (a.at_infinity != b.at_infinity) return a.at_infinity;
    if (a.at_infinity) return false;
    if (a.deg != b.deg) return a.deg < b.deg;
    for (int i = a.deg; i >= 0; --i) {
        Int ka = F.key(a.minpoly[i]), kb = F.key(b.minpoly[i]);
        if (ka != kb) return ka < kb;
    }
    return false;
}

struct LocusOutcome {
    bool smooth_seen = false;
    bool worse = false;
};

// classifies one representative per Frobenius orbit up to degree k_top and
// rebuilds P.Z; the wrappers decide what to throw
LocusOutcome locus_core(PencilDesc &P, int k_top, Route route) {
    const FieldPtr &F = P.X.F;
    const Int q = F->q();
    if (k_top < 0) throw InputError("negative scan depth");
    if (ipow(q, static_cast<unsigned long>(std::max(k_top, 0))) >
        Int(ff::kDefaultEnumCap))
        throw EnumerationCapExceeded("parameter enumeration exceeds the cap");

    std::vector<NodalPoint> Z;
    bool worse = false, smooth_seen = false;

    FibreReport rinf = classify_fibre(P, make_param(F, F->zero(), F->one()), route);
    if (rinf.cls == FibreClass::Smooth) {
        smooth_seen = true;
    } else {
        Z.push_back({true, {}, 1, rinf.cls, rinf.cls == FibreClass::Nodal});
        worse = worse || rinf.cls == FibreClass::WorseThanNodal;
    }

    for (int k = 1; k <= k_top; ++k) {
        FieldPtr Ek = ext_field(F, k);
        Lift l(F, Ek);
        std::optional<Section> sec;
        if (k > 1) sec.emplace(l);
        std::uint64_t qk = 1;
        for (int i = 0; i < k; ++i) qk *= static_cast<std::uint64_t>(F->q_u64());
        for (std::uint64_t j = 0; j < qk; ++j) {
            Coeffs s = Ek->unkey(Int(j));
            std::vector<Coeffs> orbit{s};
            bool skip = false;
            Coeffs cur = s;
            for (int i = 1; i < k; ++i) {
                cur = Ek->pow(cur, q);
                if (cur == s || Ek->key(cur) < Int(j)) {
                    skip = true; // proper subfield, or not the orbit minimum
                    break;
                }
                orbit.push_back(cur);
            }
            if (skip) continue;
            FibreReport rep = classify_fibre(P, make_param(Ek, Ek->one(), s), route);
            if (rep.cls == FibreClass::Smooth) {
                smooth_seen = true;
                continue;
            }
            Poly mp = fqpoly::one(*Ek);
            for (const Coeffs &sigma : orbit)
                mp = fqpoly::mul(*Ek, mp, Poly{Ek->neg(sigma), Ek->one()});
            Poly mpF(mp.size());
            for (std::size_t i = 0; i < mp.size(); ++i)
                mpF[i] = sec ? sec->down(mp[i]) : mp[i];
            Z.push_back({false, std::move(mpF), k, rep.cls,
                         rep.cls == FibreClass::Nodal});
            worse = worse || rep.cls == FibreClass::WorseThanNodal;
        }
    }
    std::sort(Z.begin(), Z.end(), [&](const NodalPoint &a, const NodalPoint &b) {
        return zp_less(*F, a, b);
    });
    P.Z = std::move(Z);
    P.scanned_k = std::max(P.scanned_k, k_top);
    return {smooth_seen, worse};
}

void locus_postcheck(const PencilDesc &P, const LocusOutcome &o) {
    if (o.worse)
        throw NotLefschetz("a fibre of the pencil is worse than nodal");
    if (Int(z_geometric(P)) > z_proof_bound(P))
        throw std::runtime_error("nodal locus exceeds the proof bound");
}

} // namespace

void scan_nodal_locus(PencilDesc &P, int k_scan) {
    locus_postcheck(P, locus_core(P, k_scan, Route::Auto));
}

void nodal_locus_complete(PencilDesc &P) {
    if (P.fibre_dim != 1)
        throw InputError("the complete nodal locus needs plane-curve fibres");
    if (P.D % P.X.F->p == 0)
        throw InputError(
            "characteristic divides the degree; the discriminant degree bound "
            "is unavailable");
    const int k_top = 3 * (P.D - 1) * (P.D - 1);
    LocusOutcome o = locus_core(P, k_top, Route::Auto);
    if (!o.smooth_seen)
        throw InputError("every scanned fibre is singular; the discriminant "
                         "may vanish identically");
    // the locus is exhaustive whether or not the pencil is Lefschetz
    P.z_complete = true;
    locus_postcheck(P, o);
}

int z_geometric(const PencilDesc &P) {
    int s = 0;
    for (const NodalPoint &z : P.Z) s += z.deg;
    return s;
}

Int z_proof_bound(const PencilDesc &P) {
    const int N = P.X.nvars - 2;
    return ipow(Int(P.D), static_cast<unsigned long>(N + 1));
}

int z_generic_bound(const PencilDesc &P) { return 3 * (P.D - 1) * (P.D - 1); }

Int count_smooth_params(const PencilDesc &P, int w) {
    if (!P.z_complete)
        throw InputError("counting smooth parameters needs the complete locus");
    if (w < 1) throw InputError("extension degree must be positive");
    Int total = ipow(P.X.F->q(), static_cast<unsigned long>(w)) + 1;
    for (const NodalPoint &z : P.Z)
        if (w % z.deg == 0) total -= z.deg;
    return total;
}

int euler_char_U(const PencilDesc &P) {
    if (!P.z_complete && P.scanned_k < 1)
        throw InputError("Euler characteristic needs a scanned nodal locus");
    return 2 - z_geometric(P);
}

FibreParam sample_smooth_fibre(PencilDesc &P, const FieldPtr &E,
                               std::uint64_t seed, int budget) {
    const FieldPtr &F = P.X.F;
    if (E->p != F->p || E->k % F->k != 0)
        throw FieldMismatch("sampling field does not extend the base");
    if (!E->q_fits_u64())
        throw InputError("sampling field too large for uniform draws");
    if (budget < 1) throw InputError("sampling budget must be positive");

    Lift l(F, E);
    std::vector<Poly> mpE;
    bool inf_nodal = false;
    if (P.z_complete) {
        for (const NodalPoint &z : P.Z) {
            if (z.at_infinity)
                inf_nodal = true;
            else
                mpE.push_back(l.up_poly(z.minpoly));
        }
    }

    Rng rng(seed);
    const std::uint64_t Q = E->q_u64();
    for (int attempt = 0; attempt < budget; ++attempt) {
        std::uint64_t j = rng.below(Q + 1);
        FibreParam t = j == Q ? make_param(E, E->zero(), E->one())
                              : make_param(E, E->one(), E->unkey(Int(j)));
        bool ok;
        if (P.z_complete) {
            if (j == Q) {
                ok = !inf_nodal;
            } else {
                ok = true;
                const Coeffs s = E->unkey(Int(j));
                for (const Poly &mp : mpE)
                    ok = ok && !E->is_zero(fqpoly::eval(*E, mp, s));
            }
        } else {
            ok = classify_fibre(P, t).cls == FibreClass::Smooth;
        }
        if (ok) return t;
    }
    throw RejectionBudgetExceeded("no smooth fibre found within the budget");
}

} // namespace zetagcd::pencil
