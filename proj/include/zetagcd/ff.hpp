#pragma once
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "zetagcd/bigint.hpp"
#include "zetagcd/errors.hpp"

// Finite fields F_{p^k}, p an odd-or-even prime < 2^20, as F_p[x]/(m(x))
// with m monic irreducible of degree k.  Elements are coefficient vectors
// c[0..k-1] (little-endian in the generator).  The modulus is the first
// irreducible hit by a seeded scan, so (p, k, seed) pins the field and
// every element has a canonical integer key sum c[i] p^i used for
// enumeration order and deterministic tie-breaking.

namespace zetagcd::ff {

struct FieldDesc;
using FieldPtr = std::shared_ptr<const FieldDesc>;
using Coeffs = std::vector<std::int64_t>; // residues mod p, length k

struct FieldDesc {
    std::int64_t p = 0;
    int k = 0;
    Coeffs modulus; // length k+1, monic: modulus[k] == 1
    std::uint64_t seed = 0;

    Int q() const { return ipow(Int(p), static_cast<unsigned long>(k)); }
    bool q_fits_u64() const;
    std::uint64_t q_u64() const; // valid only if q_fits_u64()

    bool same(const FieldDesc &o) const {
        return p == o.p && k == o.k && modulus == o.modulus;
    }

    // raw arithmetic on coefficient vectors of length k
    Coeffs zero() const { return Coeffs(k, 0); }
    Coeffs one() const;
    Coeffs from_int(Int n) const; // image of an integer (prime subfield)
    Coeffs gen() const;           // class of x
    bool is_zero(const Coeffs &a) const;
    Coeffs add(const Coeffs &a, const Coeffs &b) const;
    Coeffs sub(const Coeffs &a, const Coeffs &b) const;
    Coeffs neg(const Coeffs &a) const;
    Coeffs mul(const Coeffs &a, const Coeffs &b) const;
    Coeffs inv(const Coeffs &a) const; // DivisionByZero on 0
    Coeffs pow(const Coeffs &a, const Int &e) const;

    Int key(const Coeffs &a) const;   // sum a[i] p^i
    Coeffs unkey(Int key) const;      // inverse of key()
    std::string str(const Coeffs &a) const;
};

// Build F_{p^k}.  The modulus scan walks candidate indices
// (seed + j) mod p^k, j = 0,1,..., decoding each index base p into the
// non-leading coefficients; seed 0 therefore gives the lexicographically
// first irreducible.  Throws NotPrime / DegreeZero.
FieldPtr field_make(std::int64_t p, int k, std::uint64_t seed = 0);

bool is_prime_i64(std::int64_t n);

// Irreducibility over F_p: monic f of degree k is irreducible iff
// gcd(f, x^{p^j} - x) = 1 for all j <= k/2.
bool irreducible_mod_p(const Coeffs &f, std::int64_t p);

struct FieldElem {
    FieldPtr F;
    Coeffs c;

    FieldElem() = default;
    FieldElem(FieldPtr f, Coeffs v) : F(std::move(f)), c(std::move(v)) {}

    bool is_zero() const { return F->is_zero(c); }
    Int key() const { return F->key(c); }
    std::string str() const { return F->str(c); }

    friend FieldElem operator+(const FieldElem &a, const FieldElem &b) {
        check(a, b);
        return {a.F, a.F->add(a.c, b.c)};
    }
    friend FieldElem operator-(const FieldElem &a, const FieldElem &b) {
        check(a, b);
        return {a.F, a.F->sub(a.c, b.c)};
    }
    friend FieldElem operator*(const FieldElem &a, const FieldElem &b) {
        check(a, b);
        return {a.F, a.F->mul(a.c, b.c)};
    }
    friend FieldElem operator/(const FieldElem &a, const FieldElem &b) {
        check(a, b);
        return {a.F, a.F->mul(a.c, a.F->inv(b.c))};
    }
    FieldElem operator-() const { return {F, F->neg(c)}; }
    friend bool operator==(const FieldElem &a, const FieldElem &b) {
        check(a, b);
        return a.c == b.c;
    }
    friend bool operator!=(const FieldElem &a, const FieldElem &b) {
        return !(a == b);
    }

    static void check(const FieldElem &a, const FieldElem &b) {
        if (!a.F || !b.F || !a.F->same(*b.F))
            throw FieldMismatch("elements live in different fields");
    }
};

inline FieldElem make_elem(const FieldPtr &F, Int n) {
    return {F, F->from_int(std::move(n))};
}

// Enumeration in key order.  Throws EnumerationCapExceeded if q > cap.
// chunk/nchunks lets callers split the range deterministically.
inline constexpr std::uint64_t kDefaultEnumCap = 1ull << 24;
std::vector<FieldElem> field_enumerate(const FieldPtr &F,
                                       std::uint64_t cap = kDefaultEnumCap,
                                       unsigned chunk = 0,
                                       unsigned nchunks = 1);

// Subfield embedding F_{p^a} -> F_{p^b}, a | b.  The generator of the
// small field is sent to a root of the small modulus in the big field;
// roots are ordered by canonical key and the seed picks one, so the
// embedding is reproducible.
struct Embedding {
    FieldPtr small;
    FieldPtr big;
    FieldElem gen_image;
    FieldElem map(const FieldElem &a) const;
};
Embedding embed(const FieldPtr &small, const FieldPtr &big,
                std::uint64_t seed = 0);

// Roots in F_q of a univariate polynomial with F_q coefficients,
// returned as a multiset sorted by canonical key.  Direct evaluation
// scan when q <= 2^16, gcd-with-x^q-x splitting (Cantor-Zassenhaus,
// trace splitting in characteristic 2) above.
std::vector<FieldElem> univariate_roots(const std::vector<FieldElem> &f,
                                        std::uint64_t seed = 0);

} // namespace zetagcd::ff
