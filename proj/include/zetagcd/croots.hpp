#pragma once
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include "zetagcd/bigint.hpp"

// Complex root isolation at ~166-bit precision (cpp_bin_float_50), used
// for root-modulus checks and base descent.  Callers pass a squarefree
// polynomial; Durand-Kerner then converges quadratically and the
// returned roots are accurate to far better than the 2^-40 matching
// tolerance used downstream.

namespace zetagcd::croots {

using Real = boost::multiprecision::cpp_bin_float_50;

struct Cx {
    Real re{}, im{};

    friend Cx operator+(const Cx &a, const Cx &b) {
        return {a.re + b.re, a.im + b.im};
    }
    friend Cx operator-(const Cx &a, const Cx &b) {
        return {a.re - b.re, a.im - b.im};
    }
    friend Cx operator*(const Cx &a, const Cx &b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend Cx operator/(const Cx &a, const Cx &b) {
        Real n = b.re * b.re + b.im * b.im;
        return {(a.re * b.re + a.im * b.im) / n,
                (a.im * b.re - a.re * b.im) / n};
    }
};

Real cabs(const Cx &a);
Cx cpow(Cx base, long e); // integer exponent, negative allowed (base != 0)

// roots of a squarefree polynomial with rational coefficients
// (index = degree, leading coefficient nonzero)
std::vector<Cx> squarefree_roots(const std::vector<Rat> &coeffs);

} // namespace zetagcd::croots
