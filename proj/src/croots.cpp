#include "zetagcd/croots.hpp"

#include <stdexcept>

namespace zetagcd::croots {

Real cabs(const Cx &a) {
    using boost::multiprecision::sqrt;
    return sqrt(a.re * a.re + a.im * a.im);
}

Cx cpow(Cx base, long e) {
    if (e < 0) {
        base = Cx{Real(1), Real(0)} / base;
        e = -e;
    }
    Cx r{Real(1), Real(0)};
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

std::vector<Cx> squarefree_roots(const std::vector<Rat> &coeffs) {
    int n = static_cast<int>(coeffs.size()) - 1;
    if (n < 0 || coeffs.back() == 0)
        throw std::invalid_argument("untrimmed or empty polynomial");
    if (n == 0) return {};

    // monic complex coefficients
    std::vector<Cx> a(n + 1);
    Real lead = static_cast<Real>(coeffs[n]);
    for (int i = 0; i <= n; ++i)
        a[i] = {static_cast<Real>(coeffs[i]) / lead, Real(0)};

    // Cauchy bound on root moduli
    Real R = 0;
    for (int i = 0; i < n; ++i) {
        Real m = boost::multiprecision::abs(a[i].re);
        if (m > R) R = m;
    }
    R += 1;

    // spread initial guesses on a spiral off the real axis
    std::vector<Cx> z(n);
    Cx rot{Real("0.4"), Real("0.9")};
    Cx cur = rot;
    for (int j = 0; j < n; ++j) {
        z[j] = Cx{cur.re * R, cur.im * R};
        cur = cur * rot;
    }

    auto eval = [&](const Cx &x) {
        Cx acc = a[n];
        for (int i = n - 1; i >= 0; --i) acc = acc * x + a[i];
        return acc;
    };

    const Real eps = boost::multiprecision::ldexp(Real(1), -140);
    for (int sweep = 0; sweep < 2000; ++sweep) {
        Real worst = 0;
        for (int j = 0; j < n; ++j) {
            Cx num = eval(z[j]);
            Cx den{Real(1), Real(0)};
            for (int k = 0; k < n; ++k)
                if (k != j) den = den * (z[j] - z[k]);
            Cx delta = num / den;
            z[j] = z[j] - delta;
            Real rel = cabs(delta) / (Real(1) + cabs(z[j]));
            if (rel > worst) worst = rel;
        }
        if (worst < eps) return z;
    }
    throw std::runtime_error("root isolation did not converge");
}

} // namespace zetagcd::croots
