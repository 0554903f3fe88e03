#pragma once
#include <boost/multiprecision/cpp_int.hpp>

namespace zetagcd {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int ipow(Int base, unsigned long e) {
    Int r = 1;
    while (e) {
        if (e & 1) r *= base;
        base *= base;
        e >>= 1;
    }
    return r;
}

// floor of the integer square root
inline Int isqrt(const Int &n) {
    if (n < 0) throw std::domain_error("isqrt of negative");
    if (n == 0) return 0;
    Int x = Int(1) << (msb(n) / 2 + 1);
    for (;;) {
        Int y = (x + n / x) >> 1;
        if (y >= x) return x;
        x = y;
    }
}

// rational upper bound on sqrt(n), off by less than 2^-64:
// ceil(sqrt(n * 2^128)) / 2^64
inline Rat sqrt_upper(const Int &n) {
    Int scaled = n << 128;
    Int r = isqrt(scaled);
    if (r * r < scaled) r += 1;
    return Rat(r, Int(1) << 64);
}

} // namespace zetagcd
