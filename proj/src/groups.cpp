#include "zetagcd/groups.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>
#include <string>

#include "zetagcd/ff.hpp"
#include "zetagcd/rng.hpp"

namespace zetagcd::groups {

namespace {

long modl(long x, long ell) {
    long r = x % ell;
    return r < 0 ? r + ell : r;
}

long mulmod(long a, long b, long ell) { return a * b % ell; }

long pow_mod(long a, long e, long ell) {
    long r = 1;
    a = modl(a, ell);
    while (e > 0) {
        if (e & 1) r = mulmod(r, a, ell);
        a = mulmod(a, a, ell);
        e >>= 1;
    }
    return r;
}

long inv_mod(long a, long ell) {
    a = modl(a, ell);
    if (a == 0) throw DivisionByZero("inverse of 0 mod ell");
    return pow_mod(a, ell - 2, ell);
}

// +1 square, -1 non-square, 0 at 0
int legendre(long a, long ell) {
    a = modl(a, ell);
    if (a == 0) return 0;
    return pow_mod(a, (ell - 1) / 2, ell) == 1 ? 1 : -1;
}

// smallest square root mod ell, or -1; ell stays desk-sized so scan
long sqrt_mod(long a, long ell) {
    a = modl(a, ell);
    for (long x = 0; x <= ell / 2; ++x)
        if (mulmod(x, x, ell) == a) return x;
    return -1;
}

long primitive_root(long ell) {
    std::vector<long> pf;
    long m = ell - 1;
    for (long p = 2; p * p <= m; ++p)
        if (m % p == 0) {
            pf.push_back(p);
            while (m % p == 0) m /= p;
        }
    if (m > 1) pf.push_back(m);
    for (long g = 2; g < ell; ++g) {
        bool ok = true;
        for (long p : pf)
            if (pow_mod(g, (ell - 1) / p, ell) == 1) {
                ok = false;
                break;
            }
        if (ok) return g;
    }
    throw std::runtime_error("primitive_root: no generator below ell");
}

long det_mod(std::vector<long> a, int s, long ell) {
    auto at = [&](int i, int j) -> long & { return a[(std::size_t)i * s + j]; };
    long det = 1;
    for (int c = 0; c < s; ++c) {
        int piv = -1;
        for (int r = c; r < s; ++r)
            if (at(r, c) % ell != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != c) {
            for (int j = c; j < s; ++j) std::swap(at(piv, j), at(c, j));
            det = ell - det;
        }
        det = mulmod(det, modl(at(c, c), ell), ell);
        long inv = inv_mod(at(c, c), ell);
        for (int r = c + 1; r < s; ++r) {
            long f = mulmod(modl(at(r, c), ell), inv, ell);
            if (f == 0) continue;
            for (int j = c; j < s; ++j)
                at(r, j) = modl(at(r, j) - f * modl(at(c, j), ell), ell);
        }
    }
    return det;
}

// dense polynomials over F_ell, constant-first
using Poly = std::vector<long>;

void ptrim(Poly &p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly pmul(const Poly &a, const Poly &b, long ell) {
    if (a.empty() || b.empty()) return {};
    Poly c(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % ell;
    }
    return c;
}

Poly padd(const Poly &a, const Poly &b, long ell, bool subtract) {
    Poly c(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        long av = i < a.size() ? a[i] : 0;
        long bv = i < b.size() ? b[i] : 0;
        c[i] = modl(subtract ? av - bv : av + bv, ell);
    }
    ptrim(c);
    return c;
}

Poly prem(Poly a, Poly b, long ell) {
    ptrim(a);
    ptrim(b);
    if (b.empty()) throw DivisionByZero("polynomial remainder by zero");
    long lead_inv = inv_mod(b.back(), ell);
    while (a.size() >= b.size()) {
        long f = mulmod(a.back(), lead_inv, ell);
        if (f != 0) {
            std::size_t off = a.size() - b.size();
            for (std::size_t j = 0; j + 1 < b.size(); ++j)
                a[off + j] = modl(a[off + j] - f * b[j], ell);
        }
        a.pop_back(); // leading term cancels exactly
        ptrim(a);
    }
    return a;
}

// gcd up to a unit; callers only inspect the degree
Poly pgcd(Poly a, Poly b, long ell) {
    ptrim(a);
    ptrim(b);
    while (!b.empty()) {
        Poly r = prem(std::move(a), b, ell);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

Poly pderiv(const Poly &p, long ell) {
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i)
        d.push_back(mulmod(modl((long)i, ell), p[i], ell));
    ptrim(d);
    return d;
}

void check_spec(const GroupSpec &spec) {
    if (spec.ell == 2) throw CharTwo("ell = 2 is not supported");
    if (spec.s < 1 || spec.ell < 3 ||
        spec.form.size() != (std::size_t)spec.s * spec.s)
        throw InputError("malformed group spec");
}

std::vector<long> mat_vec(const MatModL &M, const std::vector<long> &x) {
    std::vector<long> y(M.s, 0);
    for (int i = 0; i < M.s; ++i) {
        long acc = 0;
        for (int j = 0; j < M.s; ++j) acc = (acc + M.at(i, j) * x[j]) % M.ell;
        y[i] = acc;
    }
    return y;
}

long bilinear(const GroupSpec &spec, const std::vector<long> &x,
              const std::vector<long> &y) {
    long acc = 0;
    for (int i = 0; i < spec.s; ++i) {
        if (x[i] == 0) continue;
        long row = 0;
        for (int j = 0; j < spec.s; ++j)
            row = (row + spec.form_at(i, j) * y[j]) % spec.ell;
        acc = (acc + x[i] * row) % spec.ell;
    }
    return acc;
}

long quad(const GroupSpec &spec, const std::vector<long> &x) {
    return bilinear(spec, x, x);
}

GroupSpec isometry_spec(const GroupSpec &spec) {
    GroupSpec k = spec;
    k.family = spec.symplectic() ? Family::Sp : Family::O;
    return k;
}

bool antidiag_ones(const GroupSpec &spec) {
    for (int i = 0; i < spec.s; ++i)
        for (int j = 0; j < spec.s; ++j)
            if (spec.form_at(i, j) != (j == spec.s - 1 - i ? 1 : 0))
                return false;
    return true;
}

bool diagonal_form(const GroupSpec &spec) {
    for (int i = 0; i < spec.s; ++i)
        for (int j = 0; j < spec.s; ++j)
            if (i != j && spec.form_at(i, j) != 0) return false;
    return true;
}

// one vector per projective point: first nonzero coordinate is 1
std::vector<std::vector<long>> projective_vectors(int s, long ell) {
    std::vector<std::vector<long>> out;
    for (int lead = 0; lead < s; ++lead) {
        std::vector<long> v(s, 0);
        v[lead] = 1;
        for (;;) {
            out.push_back(v);
            int pos = s - 1;
            while (pos > lead && v[pos] == ell - 1) v[pos--] = 0;
            if (pos == lead) break;
            ++v[pos];
        }
    }
    return out;
}

// fixed coset representative with M^T J M = lambda J; throws EmptyCoset
// when lambda is outside the multiplier image
MatModL multiplier_rep(const GroupSpec &spec, long lambda) {
    long ell = spec.ell;
    long lam = modl(lambda, ell);
    if (lam == 0) throw InputError("multiplier must be a unit mod ell");
    if (lam == 1) return MatModL::identity(spec.s, ell);
    if (!spec.similitude_family())
        throw EmptyCoset("isometry groups only meet multiplier 1");
    MatModL M = MatModL::zero(spec.s, ell);
    if (!spec.symplectic() && spec.s % 2 == 1) {
        // scalars c*I realize exactly the squares c^2
        long c = sqrt_mod(lam, ell);
        if (c < 0)
            throw EmptyCoset("odd orthogonal multipliers are the squares");
        for (int i = 0; i < spec.s; ++i) M.at(i, i) = c;
    } else if (spec.symplectic() || antidiag_ones(spec)) {
        // diag(1_r, lam_r) pairs the two halves; verified below
        for (int i = 0; i < spec.s / 2; ++i) M.at(i, i) = 1;
        for (int i = spec.s / 2; i < spec.s; ++i) M.at(i, i) = lam;
    } else if (spec.s == 2 && diagonal_form(spec)) {
        // norm-type similitude for diag(1, d): columns (x, y), (-d y, x)
        // with x^2 + d y^2 = lambda, always solvable over F_ell
        long d = spec.form_at(1, 1);
        long di = inv_mod(d, ell);
        long x = -1, y = -1;
        for (long xc = 0; xc < ell && x < 0; ++xc) {
            long yc = sqrt_mod(mulmod(modl(lam - mulmod(xc, xc, ell), ell), di, ell), ell);
            if (yc >= 0) {
                x = xc;
                y = yc;
            }
        }
        if (x < 0)
            throw std::runtime_error("binary form failed to represent a unit");
        M.at(0, 0) = x;
        M.at(0, 1) = modl(-mulmod(d, y, ell), ell);
        M.at(1, 0) = y;
        M.at(1, 1) = x;
    } else {
        throw InputError("no built-in multiplier representative for this form");
    }
    auto got = preserves(spec, M);
    if (!got || *got != lam)
        throw InputError("no built-in multiplier representative for this form");
    return M;
}

// visit {det = lam}: for 2x2 and any antisymmetric J, M^T J M = det(M) J
// identically, so this is exactly the lambda-coset of GSp(2)
template <class Fn>
void stream_det_coset(const GroupSpec &spec, long lam, Fn &&fn) {
    long ell = spec.ell;
    MatModL M = MatModL::zero(2, ell);
    for (long a = 1; a < ell; ++a) {
        long ai = inv_mod(a, ell);
        M.at(0, 0) = a;
        for (long b = 0; b < ell; ++b) {
            M.at(0, 1) = b;
            for (long c = 0; c < ell; ++c) {
                M.at(1, 0) = c;
                M.at(1, 1) = mulmod(modl(lam + b * c, ell), ai, ell);
                fn(M);
            }
        }
    }
    M.at(0, 0) = 0;
    for (long b = 1; b < ell; ++b) {
        M.at(0, 1) = b;
        M.at(1, 0) = mulmod(modl(-lam, ell), inv_mod(b, ell), ell);
        for (long d = 0; d < ell; ++d) {
            M.at(1, 1) = d;
            fn(M);
        }
    }
}

std::vector<MatModL> builtin_generators(const GroupSpec &spec) {
    std::vector<MatModL> gens;
    if (spec.symplectic()) {
        for (const auto &d : projective_vectors(spec.s, spec.ell))
            gens.push_back(transvection(spec, d, 1));
    } else {
        for (const auto &v : projective_vectors(spec.s, spec.ell))
            if (quad(spec, v) != 0) gens.push_back(reflection(spec, v));
    }
    if (spec.similitude_family()) {
        long g = primitive_root(spec.ell);
        long lam = (!spec.symplectic() && spec.s % 2 == 1)
                       ? mulmod(g, g, spec.ell)
                       : g;
        gens.push_back(multiplier_rep(spec, lam));
    }
    return gens;
}

// lambda-coset walk when it fits under the cap; false means "sample instead"
template <class Fn>
bool try_stream_coset(const GroupSpec &spec, long lam, Fn &&fn) {
    if (spec.s == 2 && spec.symplectic()) {
        if (group_order(isometry_spec(spec)) > kEnumerationCap) return false;
        stream_det_coset(spec, lam, fn);
        return true;
    }
    if (group_order(spec) > kEnumerationCap) return false;
    for (const MatModL &M : enumerate_group(spec)) {
        auto got = preserves(spec, M);
        if (got && *got == lam) fn(M);
    }
    return true;
}

Poly entry_poly(const MatModL &M, int i, int j) {
    Poly p = {i == j ? 1L : 0L, modl(-M.at(i, j), M.ell)};
    ptrim(p);
    return p;
}

// cofactor expansion of det(1 - T M) restricted to rows >= row and cols
Poly det_poly(const MatModL &M, int row, std::vector<int> &cols) {
    if (cols.size() == 1) return entry_poly(M, row, cols[0]);
    Poly acc;
    for (std::size_t t = 0; t < cols.size(); ++t) {
        int c = cols[t];
        Poly e = entry_poly(M, row, c);
        if (e.empty()) continue;
        cols.erase(cols.begin() + t);
        Poly term = pmul(e, det_poly(M, row + 1, cols), M.ell);
        cols.insert(cols.begin() + t, c);
        acc = padd(acc, term, M.ell, t % 2 == 1);
    }
    return acc;
}

} // namespace

MatModL MatModL::identity(int s, long ell) {
    MatModL m = zero(s, ell);
    for (int i = 0; i < s; ++i) m.at(i, i) = 1;
    return m;
}

MatModL MatModL::zero(int s, long ell) {
    MatModL m;
    m.s = s;
    m.ell = ell;
    m.a.assign((std::size_t)s * s, 0);
    return m;
}

MatModL MatModL::operator*(const MatModL &o) const {
    if (s != o.s || ell != o.ell)
        throw SizeMismatch("matrix product shape mismatch");
    MatModL r = zero(s, ell);
    for (int i = 0; i < s; ++i)
        for (int k = 0; k < s; ++k) {
            long v = at(i, k);
            if (v == 0) continue;
            for (int j = 0; j < s; ++j)
                r.at(i, j) = (r.at(i, j) + v * o.at(k, j)) % ell;
        }
    return r;
}

bool MatModL::operator<(const MatModL &o) const {
    if (s != o.s) return s < o.s;
    if (ell != o.ell) return ell < o.ell;
    return a < o.a;
}

double ClassFraction::value() const {
    if (denominator == 0) return 0.0;
    return Rat(numerator, denominator).convert_to<double>();
}

GroupSpec make_group_spec(Family family, int s, long ell, long delta) {
    if (ell == 2) throw CharTwo("ell = 2 is not supported");
    if (ell < 3 || ell >= (1L << 20) || !ff::is_prime_i64(ell))
        throw InputError("ell must be an odd prime below 2^20");
    if (s < 1) throw InputError("dimension must be positive");
    GroupSpec spec;
    spec.family = family;
    spec.s = s;
    spec.ell = ell;
    spec.form.assign((std::size_t)s * s, 0);
    auto F = [&](int i, int j) -> long & {
        return spec.form[(std::size_t)i * s + j];
    };
    if (spec.symplectic()) {
        if (s % 2 != 0) throw InputError("symplectic dimension must be even");
        if (delta != 0) throw InputError("delta selects orthogonal forms only");
        int r = s / 2;
        for (int i = 0; i < r; ++i) {
            F(i, r + i) = 1;
            F(r + i, i) = ell - 1;
        }
    } else {
        long d = modl(delta, ell);
        if (delta != 0 && d == 0)
            throw InputError("delta must be nonzero mod ell");
        if (s % 2 == 0 && d == 0) {
            for (int i = 0; i < s; ++i) F(i, s - 1 - i) = 1; // split
        } else {
            for (int i = 0; i < s; ++i) F(i, i) = 1;
            if (d != 0) F(s - 1, s - 1) = d;
        }
    }
    if (det_mod(spec.form, s, ell) == 0) throw InputError("degenerate form");
    return spec;
}

std::optional<long> preserves(const GroupSpec &spec, const MatModL &M) {
    check_spec(spec);
    if (M.s != spec.s || M.ell != spec.ell)
        throw SizeMismatch("matrix does not match the spec shape");
    int s = spec.s;
    long ell = spec.ell;
    std::vector<long> JM((std::size_t)s * s, 0);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            long acc = 0;
            for (int k = 0; k < s; ++k)
                acc = (acc + spec.form_at(i, k) * M.at(k, j)) % ell;
            JM[(std::size_t)i * s + j] = acc;
        }
    std::vector<long> P((std::size_t)s * s, 0);
    for (int i = 0; i < s; ++i)
        for (int j = 0; j < s; ++j) {
            long acc = 0;
            for (int k = 0; k < s; ++k)
                acc = (acc + M.at(k, i) * JM[(std::size_t)k * s + j]) % ell;
            P[(std::size_t)i * s + j] = acc;
        }
    long lam = 0;
    for (std::size_t t = 0; t < spec.form.size(); ++t)
        if (spec.form[t] != 0) {
            lam = mulmod(P[t], inv_mod(spec.form[t], ell), ell);
            break;
        }
    if (lam == 0) return std::nullopt;
    for (std::size_t t = 0; t < spec.form.size(); ++t)
        if (P[t] != mulmod(lam, spec.form[t], ell)) return std::nullopt;
    return lam;
}

Int group_order(const GroupSpec &spec) {
    check_spec(spec);
    Int L(spec.ell);
    if (spec.symplectic()) {
        if (spec.s % 2 != 0)
            throw InputError("symplectic dimension must be even");
        int r = spec.s / 2;
        Int o = ipow(L, (unsigned long)r * r);
        for (int i = 1; i <= r; ++i) o *= ipow(L, 2 * (unsigned long)i) - 1;
        if (spec.family == Family::GSp) o *= L - 1;
        return o;
    }
    Int o;
    if (spec.s % 2 == 1) {
        int r = (spec.s - 1) / 2;
        o = 2 * ipow(L, (unsigned long)r * r);
        for (int i = 1; i <= r; ++i) o *= ipow(L, 2 * (unsigned long)i) - 1;
        // odd-dimensional multipliers are the squares, half the units
        if (spec.family == Family::GO) o *= (L - 1) / 2;
    } else {
        int r = spec.s / 2;
        long disc = det_mod(spec.form, spec.s, spec.ell);
        long v = r % 2 == 0 ? disc : modl(-disc, spec.ell);
        bool split = legendre(v, spec.ell) == 1;
        o = 2 * ipow(L, (unsigned long)r * (r - 1));
        o *= split ? ipow(L, (unsigned long)r) - 1 : ipow(L, (unsigned long)r) + 1;
        for (int i = 1; i < r; ++i) o *= ipow(L, 2 * (unsigned long)i) - 1;
        if (spec.family == Family::GO) o *= L - 1;
    }
    return o;
}

std::vector<MatModL> enumerate_group(const GroupSpec &spec) {
    check_spec(spec);
    Int order = group_order(spec);
    if (order > kEnumerationCap)
        throw EnumerationCapExceeded("group order " + order.str() +
                                     " exceeds the enumeration cap");
    long ell = spec.ell;
    std::vector<MatModL> out;
    auto keep = [&](const MatModL &M) {
        auto lam = preserves(spec, M);
        if (lam && (spec.similitude_family() || *lam == 1)) out.push_back(M);
    };
    if (spec.s == 1) {
        MatModL M = MatModL::zero(1, ell);
        for (long x = 0; x < ell; ++x) {
            M.at(0, 0) = x;
            keep(M);
        }
    } else if (spec.s == 2 && spec.symplectic()) {
        auto visit = [&](const MatModL &M) { out.push_back(M); };
        if (spec.family == Family::Sp) {
            stream_det_coset(spec, 1, visit);
        } else {
            for (long lam = 1; lam < ell; ++lam)
                stream_det_coset(spec, lam, visit);
        }
    } else if (spec.s == 2 && ell <= 31) {
        MatModL M = MatModL::zero(2, ell);
        for (long a = 0; a < ell; ++a)
            for (long b = 0; b < ell; ++b)
                for (long c = 0; c < ell; ++c)
                    for (long d = 0; d < ell; ++d) {
                        M.at(0, 0) = a;
                        M.at(0, 1) = b;
                        M.at(1, 0) = c;
                        M.at(1, 1) = d;
                        keep(M);
                    }
    } else {
        auto closure =
            subgroup_closure(spec, builtin_generators(spec), kEnumerationCap);
        out.assign(closure.begin(), closure.end());
    }
    if (Int((unsigned long)out.size()) != order)
        throw std::runtime_error(
            "enumeration disagrees with the closed-form order");
    return out;
}

MatModL sample_group(const GroupSpec &spec, long lambda, std::uint64_t seed) {
    check_spec(spec);
    MatModL rep = multiplier_rep(spec, lambda); // validates the coset
    Rng rng(seed);
    // odd/even word lengths both occur, so for orthogonal groups the walk
    // reaches both determinant components
    int w = kMixingLength + (int)rng.below(2);
    MatModL M = MatModL::identity(spec.s, spec.ell);
    std::vector<long> v(spec.s);
    for (int step = 0; step < w; ++step) {
        for (;;) {
            bool nonzero = false;
            for (int i = 0; i < spec.s; ++i) {
                v[i] = (long)rng.below((std::uint64_t)spec.ell);
                nonzero |= v[i] != 0;
            }
            if (!nonzero) continue;
            if (!spec.symplectic() && quad(spec, v) == 0) continue;
            break;
        }
        if (spec.symplectic()) {
            long eps = 1 + (long)rng.below((std::uint64_t)(spec.ell - 1));
            M = M * transvection(spec, v, eps);
        } else {
            M = M * reflection(spec, v);
        }
    }
    M = M * rep;
    auto got = preserves(spec, M);
    if (!got || *got != modl(lambda, spec.ell))
        throw std::runtime_error("sampled element failed the multiplier check");
    return M;
}

std::vector<long> charpoly_reversed(const MatModL &M) {
    if (M.s < 1 || M.ell < 2 || M.a.size() != (std::size_t)M.s * M.s)
        throw InputError("malformed matrix");
    long ell = M.ell;
    if (M.s == 1) return {1, modl(-M.at(0, 0), ell)};
    if (M.s == 2) {
        long tr = modl(M.at(0, 0) + M.at(1, 1), ell);
        long det = modl(M.at(0, 0) * M.at(1, 1) % ell - M.at(0, 1) * M.at(1, 0) % ell, ell);
        return {1, modl(-tr, ell), det};
    }
    std::vector<int> cols(M.s);
    for (int j = 0; j < M.s; ++j) cols[j] = j;
    Poly p = det_poly(M, 0, cols);
    p.resize((std::size_t)M.s + 1, 0);
    return p;
}

ClassFraction coprime_fraction(const GroupSpec &spec, long lambda,
                               const std::vector<long> &f, long samples,
                               std::uint64_t seed) {
    check_spec(spec);
    long ell = spec.ell;
    long lam = modl(lambda, ell);
    multiplier_rep(spec, lam); // validates lambda against the multiplier image
    Poly fr(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) fr[i] = modl(f[i], ell);
    ptrim(fr);
    if (fr.empty()) throw InputError("f vanishes mod ell");
    ClassFraction out;
    out.denominator = group_order(isometry_spec(spec));
    if (fr.size() == 1) return out; // degree 0: nothing to share
    long hits = 0, occurrences = 0;
    Int visited = 0;
    bool exact = try_stream_coset(spec, lam, [&](const MatModL &M) {
        ++visited;
        Poly g = charpoly_reversed(M);
        ptrim(g);
        if (g == fr) ++occurrences;
        if (pgcd(g, fr, ell).size() >= 2) ++hits;
    });
    if (exact) {
        if (visited != out.denominator)
            throw std::runtime_error("coset size disagrees with the isometry order");
        if (occurrences == 0)
            throw InputError(
                "f is not a reversed characteristic polynomial on this coset");
        out.numerator = hits;
        return out;
    }
    if (samples < 1) throw InputError("sample count must be positive");
    for (long i = 0; i < samples; ++i) {
        MatModL M = sample_group(spec, lam, derive_seed(seed, (std::uint64_t)i));
        Poly g = charpoly_reversed(M);
        ptrim(g);
        if (pgcd(g, fr, ell).size() >= 2) ++hits;
    }
    out.numerator = hits;
    out.denominator = samples;
    out.exact = false;
    out.sample_size = samples;
    return out;
}

ClassFraction distinct_root_fraction(const GroupSpec &spec, long lambda,
                                     long samples, std::uint64_t seed) {
    check_spec(spec);
    long ell = spec.ell;
    long lam = modl(lambda, ell);
    multiplier_rep(spec, lam);
    auto squarefree = [&](const MatModL &M) {
        Poly g = charpoly_reversed(M);
        ptrim(g);
        return pgcd(g, pderiv(g, ell), ell).size() <= 1;
    };
    ClassFraction out;
    out.denominator = group_order(isometry_spec(spec));
    long hits = 0;
    Int visited = 0;
    bool exact = try_stream_coset(spec, lam, [&](const MatModL &M) {
        ++visited;
        if (squarefree(M)) ++hits;
    });
    if (exact) {
        if (visited != out.denominator)
            throw std::runtime_error("coset size disagrees with the isometry order");
        out.numerator = hits;
        return out;
    }
    if (samples < 1) throw InputError("sample count must be positive");
    for (long i = 0; i < samples; ++i)
        if (squarefree(sample_group(spec, lam, derive_seed(seed, (std::uint64_t)i))))
            ++hits;
    out.numerator = hits;
    out.denominator = samples;
    out.exact = false;
    out.sample_size = samples;
    return out;
}

MatModL transvection(const GroupSpec &spec, const std::vector<long> &delta,
                     long eps) {
    check_spec(spec);
    if ((int)delta.size() != spec.s) throw SizeMismatch("vector length");
    long ell = spec.ell;
    std::vector<long> d(spec.s);
    bool nonzero = false;
    for (int i = 0; i < spec.s; ++i) {
        d[i] = modl(delta[i], ell);
        nonzero |= d[i] != 0;
    }
    if (!nonzero) throw ZeroVector("transvection direction is zero");
    long e = modl(eps, ell);
    // gamma + eps <gamma, delta> delta = (I + eps d (J d)^T) gamma
    std::vector<long> u(spec.s, 0);
    for (int i = 0; i < spec.s; ++i) {
        long acc = 0;
        for (int j = 0; j < spec.s; ++j)
            acc = (acc + spec.form_at(i, j) * d[j]) % ell;
        u[i] = acc;
    }
    MatModL M = MatModL::identity(spec.s, ell);
    for (int i = 0; i < spec.s; ++i) {
        long c = mulmod(e, d[i], ell);
        if (c == 0) continue;
        for (int j = 0; j < spec.s; ++j)
            M.at(i, j) = modl(M.at(i, j) + c * u[j], ell);
    }
    return M;
}

MatModL reflection(const GroupSpec &spec, const std::vector<long> &v) {
    check_spec(spec);
    if (spec.symplectic())
        throw InputError("reflections require a symmetric form");
    if ((int)v.size() != spec.s) throw SizeMismatch("vector length");
    std::vector<long> w(spec.s);
    bool nonzero = false;
    for (int i = 0; i < spec.s; ++i) {
        w[i] = modl(v[i], spec.ell);
        nonzero |= w[i] != 0;
    }
    if (!nonzero) throw ZeroVector("reflection axis is zero");
    long q = quad(spec, w);
    if (q == 0) throw InputError("reflection axis is isotropic");
    return transvection(spec, w, modl(-2 * inv_mod(q, spec.ell), spec.ell));
}

std::set<MatModL> subgroup_closure(const GroupSpec &spec,
                                   const std::vector<MatModL> &gens,
                                   long cap) {
    check_spec(spec);
    if (cap < 1) throw InputError("cap must be positive");
    std::vector<MatModL> basis;
    for (const MatModL &g : gens) {
        if (g.s != spec.s || g.ell != spec.ell)
            throw SizeMismatch("generator shape mismatch");
        MatModL h = g;
        for (long &x : h.a) x = modl(x, spec.ell);
        basis.push_back(std::move(h));
    }
    std::set<MatModL> seen;
    std::deque<MatModL> frontier;
    MatModL id = MatModL::identity(spec.s, spec.ell);
    seen.insert(id);
    frontier.push_back(id);
    while (!frontier.empty()) {
        MatModL cur = std::move(frontier.front());
        frontier.pop_front();
        for (const MatModL &g : basis) {
            MatModL nxt = cur * g;
            if (!seen.insert(nxt).second) continue;
            if ((long)seen.size() > cap)
                throw ClosureCapExceeded("closure exceeds cap " +
                                         std::to_string(cap));
            frontier.push_back(std::move(nxt));
        }
    }
    return seen;
}

int spinor_norm(const GroupSpec &spec, const MatModL &M) {
    check_spec(spec);
    if (spec.symplectic())
        throw InputError("spinor norm requires a symmetric form");
    auto lam = preserves(spec, M);
    if (!lam || *lam != 1)
        throw NotIsometry("spinor norm is defined on isometries");
    long ell = spec.ell;
    int s = spec.s;
    // orthogonal basis by projection, repairing isotropic pivots with a
    // pair u, w of remaining vectors: q(u + w) = 2 B(u, w) != 0
    std::vector<std::vector<long>> rem;
    for (int i = 0; i < s; ++i) {
        std::vector<long> e(s, 0);
        e[i] = 1;
        rem.push_back(std::move(e));
    }
    std::vector<std::vector<long>> basis;
    while (!rem.empty()) {
        int pick = -1;
        for (std::size_t i = 0; i < rem.size(); ++i)
            if (quad(spec, rem[i]) != 0) {
                pick = (int)i;
                break;
            }
        if (pick < 0) {
            int ui = -1, wi = -1;
            for (std::size_t i = 0; i < rem.size() && ui < 0; ++i)
                for (std::size_t j = i + 1; j < rem.size(); ++j)
                    if (bilinear(spec, rem[i], rem[j]) != 0) {
                        ui = (int)i;
                        wi = (int)j;
                        break;
                    }
            if (ui < 0)
                throw std::runtime_error("degenerate residual form");
            for (int i = 0; i < s; ++i)
                rem[ui][i] = modl(rem[ui][i] + rem[wi][i], ell);
            pick = ui;
        }
        std::vector<long> x = std::move(rem[pick]);
        rem.erase(rem.begin() + pick);
        long qi = inv_mod(quad(spec, x), ell);
        for (auto &v : rem) {
            long c = mulmod(bilinear(spec, v, x), qi, ell);
            if (c == 0) continue;
            for (int i = 0; i < s; ++i) v[i] = modl(v[i] - c * x[i], ell);
        }
        basis.push_back(std::move(x));
    }
    // peel M down to the identity by explicit reflections; the spinor norm
    // is the accumulated q-product mod squares, factorization-independent
    MatModL A = M;
    long acc = 1;
    auto reflect = [&](const std::vector<long> &v) {
        acc = mulmod(acc, quad(spec, v), ell);
        A = reflection(spec, v) * A;
    };
    for (const auto &x : basis) {
        std::vector<long> w = mat_vec(A, x);
        if (w == x) continue;
        std::vector<long> u(s), v(s);
        for (int i = 0; i < s; ++i) {
            u[i] = modl(w[i] - x[i], ell);
            v[i] = modl(w[i] + x[i], ell);
        }
        if (quad(spec, u) != 0) {
            reflect(u); // sends w to x
        } else {
            reflect(v); // q(v) = 4 q(x) here; sends w to -x
            reflect(x);
        }
    }
    if (!(A == MatModL::identity(s, ell)))
        throw std::runtime_error("reflection peeling missed the identity");
    return legendre(acc, ell);
}

OrthClass classify_orth_subgroup(const GroupSpec &spec,
                                 const std::vector<MatModL> &gens) {
    check_spec(spec);
    if (spec.symplectic())
        throw InputError("classification applies to orthogonal groups");
    bool all_spin = true, all_product = true;
    for (const MatModL &g : gens) {
        int sp = spinor_norm(spec, g);
        long det = det_mod(g.a, g.s, g.ell);
        int dsign = det == 1 ? 1 : det == g.ell - 1 ? -1 : 0;
        if (dsign == 0)
            throw NotIsometry("isometries have determinant +-1");
        if (sp != 1) all_spin = false;
        if (sp * dsign != 1) all_product = false;
    }
    if (all_spin) return OrthClass::SpinorKernel;
    if (all_product) return OrthClass::SpinorTimesDetKernel;
    return OrthClass::Neither;
}

KatzBound katz_error_bound(const Int &chi_U, const Int &G_order, const Int &q,
                           int w, const Int &U_count) {
    if (U_count < 1) throw InputError("point count must be positive");
    if (G_order < 1) throw InputError("group order must be positive");
    if (q < 2) throw InputError("q must be at least 2");
    if (w < 0) throw InputError("weight must be nonnegative");
    KatzBound out;
    Int chi = chi_U < 0 ? Int(-chi_U) : chi_U;
    out.value =
        Rat(chi) * Rat(G_order) * sqrt_upper(ipow(q, (unsigned long)w)) / Rat(U_count);
    out.vacuous = out.value >= 1;
    return out;
}

} // namespace zetagcd::groups
