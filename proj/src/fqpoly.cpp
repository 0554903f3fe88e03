#include "zetagcd/fqpoly.hpp"

#include <algorithm>
#include <cstdint>
#include <utility>

#include "zetagcd/errors.hpp"
#include "zetagcd/rng.hpp"

namespace zetagcd::fqpoly {

Poly trim(const FieldDesc &F, Poly f) {
    while (!f.empty() && F.is_zero(f.back())) f.pop_back();
    return f;
}

int deg(const Poly &f) { return static_cast<int>(f.size()) - 1; }

bool is_zero(const Poly &f) { return f.empty(); }

Poly zero() { return {}; }

Poly one(const FieldDesc &F) { return {F.one()}; }

Poly monomial(const FieldDesc &F, int d, const Coeffs &c) {
    if (F.is_zero(c)) return {};
    Poly r(d + 1, F.zero());
    r[d] = c;
    return r;
}

Poly add(const FieldDesc &F, const Poly &a, const Poly &b) {
    Poly r(std::max(a.size(), b.size()), F.zero());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.add(r[i], b[i]);
    return trim(F, std::move(r));
}

Poly sub(const FieldDesc &F, const Poly &a, const Poly &b) {
    Poly r(std::max(a.size(), b.size()), F.zero());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) r[i] = F.sub(r[i], b[i]);
    return trim(F, std::move(r));
}

Poly mul(const FieldDesc &F, const Poly &a, const Poly &b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, F.zero());
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (F.is_zero(a[i])) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    }
    return trim(F, std::move(r));
}

Poly scal(const FieldDesc &F, const Coeffs &s, const Poly &a) {
    Poly r(a.size(), F.zero());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = F.mul(s, a[i]);
    return trim(F, std::move(r));
}

Poly monic(const FieldDesc &F, const Poly &a) {
    if (a.empty()) return a;
    return scal(F, F.inv(a.back()), a);
}

std::pair<Poly, Poly> divmod(const FieldDesc &F, const Poly &a, const Poly &b) {
    if (b.empty()) throw DivisionByZero("polynomial division by zero");
    if (a.size() < b.size()) return {Poly{}, a};
    Coeffs li = F.inv(b.back());
    Poly rem = a;
    Poly q(a.size() - b.size() + 1, F.zero());
    for (int i = static_cast<int>(a.size()) - static_cast<int>(b.size()); i >= 0;
         --i) {
        Coeffs c = F.mul(rem[i + b.size() - 1], li);
        if (F.is_zero(c)) continue;
        q[i] = c;
        for (std::size_t j = 0; j < b.size(); ++j)
            rem[i + j] = F.sub(rem[i + j], F.mul(c, b[j]));
    }
    return {trim(F, std::move(q)), trim(F, std::move(rem))};
}

Poly mod(const FieldDesc &F, const Poly &a, const Poly &b) {
    return divmod(F, a, b).second;
}

Poly exact_div(const FieldDesc &F, const Poly &a, const Poly &b) {
    auto [q, r] = divmod(F, a, b);
    if (!is_zero(r)) throw std::runtime_error("inexact polynomial division");
    return q;
}

Poly gcd(const FieldDesc &F, Poly a, Poly b) {
    a = trim(F, std::move(a));
    b = trim(F, std::move(b));
    while (!b.empty()) {
        Poly r = mod(F, a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return monic(F, a);
}

Poly derivative(const FieldDesc &F, const Poly &a) {
    if (a.size() <= 1) return {};
    Poly r(a.size() - 1, F.zero());
    for (std::size_t i = 1; i < a.size(); ++i) {
        Coeffs m = F.from_int(Int(i));
        r[i - 1] = F.mul(m, a[i]);
    }
    return trim(F, std::move(r));
}

Coeffs eval(const FieldDesc &F, const Poly &a, const Coeffs &x) {
    Coeffs acc = F.zero();
    for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
        acc = F.add(F.mul(acc, x), a[i]);
    return acc;
}

Poly mulmod(const FieldDesc &F, const Poly &a, const Poly &b, const Poly &m) {
    return mod(F, mul(F, a, b), m);
}

Poly powmod(const FieldDesc &F, Poly base, Int e, const Poly &m) {
    Poly r = one(F);
    base = mod(F, base, m);
    while (e > 0) {
        if ((e & 1) != 0) r = mulmod(F, r, base, m);
        base = mulmod(F, base, base, m);
        e >>= 1;
    }
    return r;
}

namespace {

Poly x_poly(const FieldDesc &F) { return monomial(F, 1, F.one()); }

// unique p-th root of a field element: c -> c^{p^{k-1}}
Coeffs elem_pth_root(const FieldDesc &F, const Coeffs &c) {
    Int e = 1;
    for (int i = 1; i < F.k; ++i) e *= F.p;
    return F.pow(c, e);
}

// f with vanishing derivative is g(x^p); returns the p-th root of f
Poly poly_pth_root(const FieldDesc &F, const Poly &f) {
    const auto p = static_cast<std::size_t>(F.p);
    Poly g((f.size() + p - 1) / p, F.zero());
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i % p == 0) {
            g[i / p] = elem_pth_root(F, f[i]);
        } else if (!F.is_zero(f[i])) {
            throw std::runtime_error("pth root: stray exponent");
        }
    }
    return trim(F, std::move(g));
}

Coeffs random_elem(const FieldDesc &F, Rng &rng) {
    Coeffs c(F.k, 0);
    for (auto &r : c) r = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(F.p)));
    return c;
}

Poly random_below(const FieldDesc &F, int d, Rng &rng) {
    Poly r(static_cast<std::size_t>(d), F.zero());
    for (auto &c : r) c = random_elem(F, rng);
    return trim(F, std::move(r));
}

// splits a squarefree product of degree-d irreducibles
void equal_degree(const FieldDesc &F, const Poly &g, int d, Rng &rng,
                  std::vector<Poly> &out) {
    if (deg(g) == d) {
        out.push_back(monic(F, g));
        return;
    }
    for (;;) {
        Poly r = random_below(F, deg(g), rng);
        if (deg(r) < 1) continue;
        Poly s;
        if (F.p == 2) {
            // the F_2-trace of r mod g separates the factors
            Poly acc = r, cur = r;
            const int m = F.k * d;
            for (int i = 1; i < m; ++i) {
                cur = mulmod(F, cur, cur, g);
                acc = add(F, acc, cur);
            }
            s = gcd(F, acc, g);
        } else {
            Int e = 1;
            for (int i = 0; i < d; ++i) e *= F.q();
            Poly h = powmod(F, r, (e - 1) / 2, g);
            s = gcd(F, sub(F, h, one(F)), g);
        }
        if (deg(s) > 0 && deg(s) < deg(g)) {
            equal_degree(F, s, d, rng, out);
            equal_degree(F, exact_div(F, g, s), d, rng, out);
            return;
        }
    }
}

// monic squarefree input; distinct-degree then equal-degree splitting
std::vector<Poly> split_squarefree(const FieldDesc &F, Poly w, Rng &rng) {
    std::vector<Poly> out;
    const Poly x = x_poly(F);
    Int qd = 1;
    for (int d = 1; 2 * d <= deg(w); ++d) {
        qd *= F.q();
        Poly h = powmod(F, x, qd, w);
        Poly g = gcd(F, sub(F, h, x), w);
        if (deg(g) > 0) {
            equal_degree(F, g, d, rng, out);
            w = exact_div(F, w, g);
        }
    }
    if (deg(w) > 0) out.push_back(std::move(w));
    return out;
}

bool poly_key_less(const FieldDesc &F, const Poly &a, const Poly &b) {
    if (deg(a) != deg(b)) return deg(a) < deg(b);
    for (int i = deg(a); i >= 0; --i) {
        Int ka = F.key(a[i]), kb = F.key(b[i]);
        if (ka != kb) return ka < kb;
    }
    return false;
}

void factor_rec(const FieldDesc &F, Poly f, int mult, Rng &rng,
                std::vector<std::pair<Poly, int>> &out) {
    f = monic(F, f);
    if (deg(f) < 1) return;
    Poly fp = derivative(F, f);
    if (is_zero(fp)) {
        factor_rec(F, poly_pth_root(F, f), mult * static_cast<int>(F.p), rng, out);
        return;
    }
    Poly w = exact_div(F, f, gcd(F, f, fp));
    for (auto &u : split_squarefree(F, w, rng)) {
        int e = 0;
        for (;;) {
            auto [q, r] = divmod(F, f, u);
            if (!is_zero(r)) break;
            f = std::move(q);
            ++e;
        }
        out.emplace_back(std::move(u), e * mult);
    }
    // what is left has every multiplicity divisible by p
    if (deg(f) > 0) factor_rec(F, std::move(f), mult, rng, out);
}

} // namespace

bool is_irreducible(const FieldDesc &F, const Poly &f) {
    const int n = deg(f);
    if (n < 1) return false;
    if (n == 1) return true;
    Poly g = monic(F, f);
    const Poly x = x_poly(F);
    Int qn = 1;
    for (int i = 0; i < n; ++i) qn *= F.q();
    if (powmod(F, x, qn, g) != mod(F, x, g)) return false;
    int rest = n;
    for (int r = 2; r <= rest; ++r) {
        if (rest % r != 0) continue;
        while (rest % r == 0) rest /= r;
        Int e = 1;
        for (int i = 0; i < n / r; ++i) e *= F.q();
        Poly h = gcd(F, sub(F, powmod(F, x, e, g), x), g);
        if (deg(h) > 0) return false;
    }
    return true;
}

std::vector<std::pair<Poly, int>> factorize(const FieldDesc &F, Poly f,
                                            std::uint64_t seed) {
    f = trim(F, std::move(f));
    if (is_zero(f)) throw ZeroInput("factorize: zero polynomial");
    std::vector<std::pair<Poly, int>> out;
    Rng rng(derive_seed(seed, 0x66616374));
    factor_rec(F, std::move(f), 1, rng, out);
    std::sort(out.begin(), out.end(), [&](const auto &a, const auto &b) {
        return poly_key_less(F, a.first, b.first);
    });
    return out;
}

std::vector<Coeffs> roots_in_field(const FieldDesc &F, const Poly &f,
                                   std::uint64_t seed) {
    Poly g = trim(F, f);
    if (is_zero(g)) throw ZeroInput("roots_in_field: zero polynomial");
    if (deg(g) < 1) return {};
    const Poly x = x_poly(F);
    Poly lin = gcd(F, sub(F, powmod(F, x, F.q(), g), x), g);
    if (deg(lin) < 1) return {};
    Rng rng(derive_seed(seed, 0x726f6f74));
    std::vector<Poly> parts;
    equal_degree(F, lin, 1, rng, parts);
    std::vector<Coeffs> roots;
    roots.reserve(parts.size());
    for (const auto &u : parts) roots.push_back(F.neg(u[0]));
    std::sort(roots.begin(), roots.end(),
              [&](const Coeffs &a, const Coeffs &b) { return F.key(a) < F.key(b); });
    return roots;
}

} // namespace zetagcd::fqpoly
