#include "zetagcd/poly.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include "zetagcd/croots.hpp"

namespace zetagcd::poly {

IntPoly itrim(IntPoly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

int ideg(const IntPoly &f) { return (int)f.size() - 1; }

IntPoly iadd(const IntPoly &a, const IntPoly &b) {
    IntPoly r(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return itrim(std::move(r));
}

IntPoly isub(const IntPoly &a, const IntPoly &b) {
    IntPoly r(std::max(a.size(), b.size()), Int(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return itrim(std::move(r));
}

IntPoly imul(const IntPoly &a, const IntPoly &b) {
    if (a.empty() || b.empty()) return {};
    IntPoly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return itrim(std::move(r));
}

Int ieval(const IntPoly &f, const Int &x) {
    Int r = 0;
    for (size_t i = f.size(); i-- > 0;) r = r * x + f[i];
    return r;
}

std::string ipoly_str(const IntPoly &f, const std::string &var) {
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        Int m = f[i];
        if (first) {
            if (m < 0) {
                os << "-";
                m = -m;
            }
            first = false;
        } else {
            os << (m < 0 ? " - " : " + ");
            if (m < 0) m = -m;
        }
        if (i == 0 || m != 1) os << m;
        if (i >= 1) {
            os << var;
            if (i >= 2) os << "^" << i;
        }
    }
    if (first) return "0";
    return os.str();
}

RatPoly to_rat(const IntPoly &f) {
    RatPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = Rat(f[i]);
    return r;
}

IntPoly to_int_exact(const RatPoly &f) {
    IntPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        if (boost::multiprecision::denominator(f[i]) != 1)
            throw NonIntegralCoefficient("coefficient " + std::to_string(i) +
                                         " is not an integer");
        r[i] = boost::multiprecision::numerator(f[i]);
    }
    return itrim(std::move(r));
}

RatPoly rtrim(RatPoly f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

int rdeg(const RatPoly &f) { return (int)f.size() - 1; }

RatPoly radd(const RatPoly &a, const RatPoly &b) {
    RatPoly r(std::max(a.size(), b.size()), Rat(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    return rtrim(std::move(r));
}

RatPoly rsub(const RatPoly &a, const RatPoly &b) {
    RatPoly r(std::max(a.size(), b.size()), Rat(0));
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    return rtrim(std::move(r));
}

RatPoly rmul(const RatPoly &a, const RatPoly &b) {
    if (a.empty() || b.empty()) return {};
    RatPoly r(a.size() + b.size() - 1, Rat(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return rtrim(std::move(r));
}

std::pair<RatPoly, RatPoly> rdivmod(const RatPoly &a0, const RatPoly &b0) {
    RatPoly a = rtrim(a0), b = rtrim(b0);
    if (b.empty()) throw DivisionByZero("polynomial division by zero");
    if (a.size() < b.size()) return {RatPoly{}, std::move(a)};
    RatPoly q(a.size() - b.size() + 1, Rat(0));
    const Rat &lead = b.back();
    while (!a.empty() && a.size() >= b.size()) {
        size_t shift = a.size() - b.size();
        Rat c = a.back() / lead;
        q[shift] = c;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= c * b[i];
        a = rtrim(std::move(a));
    }
    return {rtrim(std::move(q)), std::move(a)};
}

RatPoly rexact_div(const RatPoly &a, const RatPoly &b) {
    auto [q, r] = rdivmod(a, b);
    if (!r.empty()) throw std::runtime_error("rexact_div: remainder is nonzero");
    return q;
}

RatPoly rderivative(const RatPoly &f) {
    if (f.size() <= 1) return {};
    RatPoly r(f.size() - 1);
    for (size_t i = 1; i < f.size(); ++i) r[i - 1] = Rat(i) * f[i];
    return rtrim(std::move(r));
}

RatPoly rmonic(const RatPoly &f0) {
    RatPoly f = rtrim(f0);
    if (f.empty()) return f;
    Rat lead = f.back();
    for (auto &c : f) c /= lead;
    return f;
}

namespace {

// plain monic gcd over Q (Euclid); internal -- poly_gcd adds the
// constant-term renormalization on top
RatPoly gcd_monic(RatPoly a, RatPoly b) {
    a = rtrim(std::move(a));
    b = rtrim(std::move(b));
    while (!b.empty()) {
        RatPoly r = rdivmod(a, b).second;
        a = std::move(b);
        b = std::move(r);
    }
    return rmonic(a);
}

} // namespace

RatPoly poly_gcd(const RatPoly &a, const RatPoly &b) {
    if (rtrim(a).empty() && rtrim(b).empty())
        throw BothZero("poly_gcd: both inputs are zero");
    RatPoly g = gcd_monic(a, b);
    if (!g.empty() && g[0] != 0) {
        Rat c0 = g[0];
        for (auto &c : g) c /= c0;
    }
    return g;
}

Int resultant(const IntPoly &f0, const IntPoly &g0) {
    IntPoly f = itrim(f0), g = itrim(g0);
    if (f.empty() || g.empty()) throw ZeroInput("resultant: zero polynomial");
    int m = ideg(f), n = ideg(g);
    if (m == 0 && n == 0) return 1;
    if (m == 0) return ipow(f[0], (unsigned long)n);
    if (n == 0) return ipow(g[0], (unsigned long)m);

    int N = m + n;
    std::vector<std::vector<Int>> M(N, std::vector<Int>(N, Int(0)));
    for (int r = 0; r < n; ++r)
        for (int i = 0; i <= m; ++i) M[r][r + i] = f[m - i];
    for (int r = 0; r < m; ++r)
        for (int i = 0; i <= n; ++i) M[n + r][r + i] = g[n - i];

    // Bareiss fraction-free elimination; every division is exact
    Int prev = 1;
    int sign = 1;
    for (int k = 0; k + 1 < N; ++k) {
        if (M[k][k] == 0) {
            int piv = -1;
            for (int r = k + 1; r < N && piv < 0; ++r)
                if (M[r][k] != 0) piv = r;
            if (piv < 0) return 0;
            std::swap(M[k], M[piv]);
            sign = -sign;
        }
        for (int r = k + 1; r < N; ++r) {
            for (int c = k + 1; c < N; ++c)
                M[r][c] = (M[r][c] * M[k][k] - M[r][k] * M[k][c]) / prev;
            M[r][k] = 0;
        }
        prev = M[k][k];
    }
    return sign > 0 ? M[N - 1][N - 1] : Int(-M[N - 1][N - 1]);
}

std::vector<std::pair<RatPoly, int>> squarefree_decomposition(const RatPoly &f0) {
    RatPoly f = rtrim(f0);
    if (f.empty()) throw ZeroInput("squarefree_decomposition: zero polynomial");
    std::vector<std::pair<RatPoly, int>> out;
    if (rdeg(f) == 0) return out;
    f = rmonic(f);

    // Yun's algorithm
    RatPoly fp = rderivative(f);
    RatPoly a0 = gcd_monic(f, fp);
    RatPoly w = rexact_div(f, a0);
    RatPoly y = rexact_div(fp, a0);
    RatPoly z = rsub(y, rderivative(w));
    int i = 1;
    while (rdeg(w) > 0) {
        RatPoly g = gcd_monic(w, z);
        if (rdeg(g) > 0) out.emplace_back(g, i);
        w = rexact_div(w, g);
        y = rexact_div(z, g);
        z = rsub(y, rderivative(w));
        ++i;
    }
    return out;
}

std::string weil_str(const WeilPoly &f) {
    std::ostringstream os;
    os << ipoly_str(f.c) << "  [q=" << f.q << ", w=" << f.w << "]";
    return os.str();
}

WeilPoly power_map(const WeilPoly &f, int r) {
    if (r < 1) throw InputError("power_map: r must be >= 1");
    if (f.c.empty() || f.c[0] != 1)
        throw NonUnitConstantTerm("power_map: constant term must be 1");
    WeilPoly out;
    out.q = ipow(f.q, (unsigned long)r);
    out.w = f.w;
    int n = ideg(f.c);
    if (n == 0) {
        out.c = {Int(1)};
        return out;
    }

    // f = sum (-1)^i e_i T^i with e_i elementary symmetric in the
    // inverse roots alpha_j
    std::vector<Int> e(n + 1);
    for (int i = 0; i <= n; ++i) e[i] = (i % 2 == 0) ? f.c[i] : Int(-f.c[i]);

    // power sums p_m = sum_j alpha_j^m by Newton's identities
    long rn = (long)r * n;
    std::vector<Int> p(rn + 1, Int(0));
    for (long m = 1; m <= rn; ++m) {
        Int acc = 0;
        long top = std::min<long>(m - 1, n);
        for (long i = 1; i <= top; ++i) {
            Int term = e[i] * p[m - i];
            acc += (i % 2 == 1) ? term : Int(-term);
        }
        if (m <= n) acc += Int((m % 2 == 1) ? m : -m) * e[m];
        p[m] = acc;
    }

    // inverse Newton: elementary symmetric functions of the alpha_j^r
    std::vector<Int> e2(n + 1, Int(0));
    e2[0] = 1;
    out.c.assign(n + 1, Int(0));
    out.c[0] = 1;
    for (int m = 1; m <= n; ++m) {
        Int acc = 0;
        for (int i = 1; i <= m; ++i) {
            Int term = e2[m - i] * p[(long)r * i];
            acc += (i % 2 == 1) ? term : Int(-term);
        }
        if (acc % m != 0)
            throw std::runtime_error(
                "power_map: non-integral coefficient (internal error)");
        e2[m] = acc / m;
        out.c[m] = (m % 2 == 0) ? e2[m] : Int(-e2[m]);
    }
    out.c = itrim(std::move(out.c));
    return out;
}

namespace {

// inverse roots (the alpha_j with f = prod (1 - alpha_j T)), isolated on
// the squarefree factors and replicated by multiplicity
std::vector<croots::Cx> inverse_roots(const IntPoly &c) {
    int s = ideg(c);
    std::vector<croots::Cx> roots;
    if (s <= 0) return roots;
    RatPoly rev(s + 1);
    for (int i = 0; i <= s; ++i) rev[i] = Rat(c[s - i]); // monic: c[0] = 1
    for (auto &[g, mult] : squarefree_decomposition(rev)) {
        auto rs = croots::squarefree_roots(g);
        for (auto &root : rs)
            for (int t = 0; t < mult; ++t) roots.push_back(root);
    }
    return roots;
}

} // namespace

WeilReport is_weil(const WeilPoly &f, const Int &lambda, double tol) {
    WeilReport rep;
    if (f.c.empty()) {
        rep.reason = "zero polynomial";
        return rep;
    }
    if (f.c[0] != 1) {
        rep.reason = "constant term is not 1";
        return rep;
    }
    if (lambda < 1 || lambda != ipow(f.q, (unsigned long)f.w)) {
        rep.reason = "lambda does not equal q^w";
        return rep;
    }
    int s = ideg(f.c);
    if (s == 0) {
        rep.ok = true;
        return rep;
    }

    bool feq = false;
    if (s % 2 == 0) {
        for (int sign : {+1, -1}) {
            bool ok = true;
            for (int i = 0; 2 * i <= s && ok; ++i) {
                Int rhs = ipow(lambda, (unsigned long)(s / 2 - i)) * f.c[i];
                if (sign < 0) rhs = -rhs;
                if (f.c[s - i] != rhs) ok = false;
            }
            if (ok) {
                feq = true;
                rep.sign = sign;
                break;
            }
        }
    } else {
        Int mu = isqrt(lambda);
        if (mu * mu != lambda) {
            rep.reason = "odd degree requires lambda to be a perfect square";
            return rep;
        }
        for (int sign : {+1, -1}) {
            bool ok = true;
            for (int i = 0; 2 * i < s && ok; ++i) {
                Int rhs = ipow(mu, (unsigned long)(s - 2 * i)) * f.c[i];
                if (sign < 0) rhs = -rhs;
                if (f.c[s - i] != rhs) ok = false;
            }
            if (ok) {
                feq = true;
                rep.sign = sign;
                break;
            }
        }
    }
    if (!feq) {
        rep.reason = "functional equation fails";
        return rep;
    }

    croots::Real target = sqrt(croots::Real(lambda));
    croots::Real maxerr = 0;
    for (auto &al : inverse_roots(f.c)) {
        croots::Real err = abs(croots::cabs(al) - target) / target;
        if (err > maxerr) maxerr = err;
    }
    rep.max_modulus_err = maxerr.convert_to<double>();
    if (maxerr > croots::Real(tol)) {
        rep.reason = "inverse-root modulus deviates from sqrt(lambda)";
        return rep;
    }
    rep.ok = true;
    return rep;
}

WeilPoly recover_base(const WeilPoly &f1, int r1, const WeilPoly &f2, int r2,
                      const Int &q, int w) {
    if (r1 < 1 || r2 < 1)
        throw InputError("recover_base: exponents must be >= 1");
    if (std::gcd(r1, r2) != 1)
        throw NotCoprimeExponents("recover_base: gcd(r1, r2) must be 1");
    if (f1.c.empty() || f1.c[0] != 1 || f2.c.empty() || f2.c[0] != 1)
        throw NonUnitConstantTerm("recover_base: constant terms must be 1");
    if (f1.q != ipow(q, (unsigned long)r1) || f2.q != ipow(q, (unsigned long)r2) ||
        f1.w != w || f2.w != w)
        throw InputError("recover_base: inconsistent base or weight");
    int n = ideg(f1.c);
    if (ideg(f2.c) != n)
        throw NoConsistentMatching("recover_base: degree mismatch");
    if (n == 0) return WeilPoly{IntPoly{Int(1)}, q, w};

    // Bezout: a*r1 + b*r2 = 1
    long a, b;
    {
        long r_old = r1, r_cur = r2, s_old = 1, s_cur = 0, t_old = 0, t_cur = 1;
        while (r_cur != 0) {
            long quo = r_old / r_cur;
            std::tie(r_old, r_cur) = std::pair(r_cur, r_old - quo * r_cur);
            std::tie(s_old, s_cur) = std::pair(s_cur, s_old - quo * s_cur);
            std::tie(t_old, t_cur) = std::pair(t_cur, t_old - quo * t_cur);
        }
        a = s_old;
        b = t_old;
    }

    auto betas = inverse_roots(f1.c);
    auto gammas = inverse_roots(f2.c);

    using croots::Cx;
    using croots::Real;
    const Real tol = boost::multiprecision::ldexp(Real(1), -40);
    auto relerr = [](const Cx &x, const Cx &y) {
        Real d = croots::cabs(x - y);
        Real scale = croots::cabs(y);
        return scale == 0 ? d : Real(d / scale);
    };

    // candidate alpha = beta^a gamma^b for each compatible pairing
    std::vector<std::vector<char>> compat(n, std::vector<char>(n, 0));
    std::vector<std::vector<Cx>> cand(n, std::vector<Cx>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            Cx al = croots::cpow(betas[i], a) * croots::cpow(gammas[j], b);
            if (relerr(croots::cpow(al, r1), betas[i]) < tol &&
                relerr(croots::cpow(al, r2), gammas[j]) < tol) {
                compat[i][j] = 1;
                cand[i][j] = al;
            }
        }

    auto grid_key = [](const Cx &z) {
        auto grid = [](const Real &x) {
            return boost::multiprecision::round(boost::multiprecision::ldexp(x, 35))
                .convert_to<Int>();
        };
        return std::pair<Int, Int>(grid(z.re), grid(z.im));
    };

    std::set<IntPoly> verified;
    std::vector<char> used(n, 0);
    std::vector<int> pick(n, -1);
    long nodes = 0;
    const long node_cap = 1L << 20;

    std::function<void(int)> search = [&](int depth) {
        if (++nodes > node_cap)
            throw BudgetError("recover_base: matching search budget exceeded");
        if (depth == n) {
            // expand prod (1 - alpha_k T) and round to integers
            std::vector<Cx> co(n + 1);
            co[0] = {Real(1), Real(0)};
            for (int i = 0; i < n; ++i) {
                const Cx &al = cand[i][pick[i]];
                co[i + 1] = {Real(0), Real(0)};
                for (int t = i + 1; t >= 1; --t) co[t] = co[t] - al * co[t - 1];
            }
            IntPoly c(n + 1);
            for (int t = 0; t <= n; ++t) {
                Int ci = boost::multiprecision::round(co[t].re).convert_to<Int>();
                if (croots::cabs(co[t] - Cx{Real(ci), Real(0)}) > Real(0.25))
                    return; // matched multiset is not near an integer polynomial
                c[t] = ci;
            }
            if (c[0] != 1) return;
            WeilPoly candidate{itrim(std::move(c)), q, w};
            if (verified.count(candidate.c)) return;
            try {
                if (power_map(candidate, r1).c == f1.c &&
                    power_map(candidate, r2).c == f2.c)
                    verified.insert(candidate.c);
            } catch (const std::exception &) {
                // candidate fails exact reconstruction; drop it
            }
            return;
        }
        std::set<std::pair<Int, Int>> tried; // dedup equal gamma values
        for (int j = 0; j < n; ++j) {
            if (used[j] || !compat[depth][j]) continue;
            if (!tried.insert(grid_key(gammas[j])).second) continue;
            used[j] = 1;
            pick[depth] = j;
            search(depth + 1);
            used[j] = 0;
        }
    };
    search(0);

    if (verified.empty())
        throw NoConsistentMatching(
            "recover_base: no matching survives exact verification");
    if (verified.size() > 1)
        throw AmbiguousMatching(
            "recover_base: several distinct polynomials verify exactly");
    return WeilPoly{*verified.begin(), q, w};
}

} // namespace zetagcd::poly
