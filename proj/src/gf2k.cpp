#include "zetagcd/gf2k.hpp"

#include <immintrin.h>

#include <stdexcept>

namespace zetagcd::gf2k {

namespace {

inline std::uint64_t clmul_soft(std::uint64_t a, std::uint64_t b) {
    std::uint64_t acc = 0;
    while (b) {
        acc ^= a * (b & 1); // branch-free conditional xor
        a <<= 1;
        b >>= 1;
    }
    return acc;
}

// the translation unit is compiled with -mpclmul; the runtime cpuid check
// keeps this path off CPUs that lack the instruction
inline std::uint64_t clmul_hw(std::uint64_t a, std::uint64_t b) {
    __m128i x = _mm_set_epi64x(0, static_cast<long long>(a));
    __m128i y = _mm_set_epi64x(0, static_cast<long long>(b));
    return static_cast<std::uint64_t>(
        _mm_cvtsi128_si64(_mm_clmulepi64_si128(x, y, 0)));
}

template <bool CLMUL> inline std::uint64_t clmul(std::uint64_t a, std::uint64_t b) {
    if constexpr (CLMUL)
        return clmul_hw(a, b);
    else
        return clmul_soft(a, b);
}

} // namespace

bool Engine::cpu_has_clmul() { return __builtin_cpu_supports("pclmul"); }

Engine::Engine(const ff::FieldDesc &F, bool allow_clmul) {
    if (F.p != 2) throw InputError("gf2k engine needs characteristic 2");
    if (F.k < 1 || F.k > 30) throw InputError("gf2k engine supports k <= 30");
    k_ = F.k;
    mask_ = (k_ == 32) ? ~0u : ((1u << k_) - 1);
    mod_ = 0;
    for (int i = 0; i <= k_; ++i)
        if (F.modulus[i]) mod_ |= 1ull << i;
    // mu = floor(x^{2k} / m), by long division over GF(2)
    {
        std::uint64_t rem = 1ull << (2 * k_);
        std::uint64_t q = 0;
        for (int i = 2 * k_; i >= k_; --i) {
            if (rem >> i & 1) {
                rem ^= mod_ << (i - k_);
                q |= 1ull << (i - k_);
            }
        }
        mu_ = q;
    }
    clmul_ = allow_clmul && cpu_has_clmul();
    // trace mask: bit i set iff Tr(x^i) = 1
    trace_mask_ = 0;
    for (int i = 0; i < k_; ++i) {
        std::uint32_t e = 1u << i;
        std::uint32_t t = e, acc = e;
        for (int j = 1; j < k_; ++j) {
            t = sqr(t);
            acc ^= t;
        }
        if (acc != 0 && acc != 1)
            throw std::runtime_error("trace escaped the prime field");
        if (acc == 1) trace_mask_ |= 1u << i;
    }
}

namespace {

// Barrett reduction of a product of degree <= 2k-2
template <bool CLMUL>
inline std::uint32_t reduce(std::uint64_t p, int k, std::uint64_t mod,
                            std::uint64_t mu, std::uint32_t mask) {
    std::uint64_t hi = p >> k;
    std::uint64_t t = clmul<CLMUL>(hi, mu) >> k;
    std::uint64_t r = p ^ clmul<CLMUL>(t, mod);
    return static_cast<std::uint32_t>(r) & mask;
}

template <bool CLMUL>
inline std::uint32_t mul_t(std::uint32_t a, std::uint32_t b, int k,
                           std::uint64_t mod, std::uint64_t mu,
                           std::uint32_t mask) {
    return reduce<CLMUL>(clmul<CLMUL>(a, b), k, mod, mu, mask);
}

} // namespace

std::uint32_t Engine::mul(std::uint32_t a, std::uint32_t b) const {
    return clmul_ ? mul_t<true>(a, b, k_, mod_, mu_, mask_)
                  : mul_t<false>(a, b, k_, mod_, mu_, mask_);
}

std::uint32_t Engine::inv(std::uint32_t a) const {
    if (a == 0) throw DivisionByZero("gf2k inverse of zero");
    // a^(2^k - 2); exponent bits are 0 then k-1 ones
    std::uint32_t r = 1, base = a;
    for (int i = 1; i < k_; ++i) {
        base = sqr(base);
        r = mul(r, base);
    }
    return r;
}

std::uint32_t Engine::pack(const ff::Coeffs &c) {
    std::uint32_t v = 0;
    for (std::size_t i = 0; i < c.size(); ++i)
        if (c[i]) v |= 1u << i;
    return v;
}

ff::Coeffs Engine::unpack(std::uint32_t v) const {
    ff::Coeffs c(k_, 0);
    for (int i = 0; i < k_; ++i) c[i] = (v >> i) & 1;
    return c;
}

namespace {

// degree of the gcd of the monic cubic v^3 + P v + Q (Q != 0) and a
// nonzero polynomial r of degree <= 2, using pseudo-remainders so no
// inversions are needed; gcd degrees are scale-invariant.
template <bool CLMUL>
inline int gcd_degree_cubic(std::uint32_t P, std::uint32_t Q, std::uint32_t r2,
                            std::uint32_t r1, std::uint32_t r0, int k,
                            std::uint64_t mod, std::uint64_t mu,
                            std::uint32_t mask) {
#define MUL(x, y) mul_t<CLMUL>((x), (y), k, mod, mu, mask)
    std::uint32_t a[4] = {Q, P, 0, 1}; // f tilde
    std::uint32_t b[4] = {r0, r1, r2, 0};
    int da = 3;
    int db = r2 ? 2 : (r1 ? 1 : 0); // r nonzero by caller contract
    for (;;) {
        // a mod b by pseudo-division: a = lc(b)*a ^ lc(a)*x^(da-db)*b
        while (da >= db) {
            std::uint32_t la = a[da], lb = b[db];
            int shift = da - db;
            for (int i = 0; i <= da; ++i) a[i] = MUL(a[i], lb);
            for (int i = 0; i <= db; ++i) a[i + shift] ^= MUL(b[i], la);
            // degree dropped by at least one
            da--;
            while (da >= 0 && a[da] == 0) da--;
            if (da < 0) return db; // b divides: gcd = b
        }
        if (da < 0) return db;
        // swap roles
        for (int i = 0; i < 4; ++i) std::swap(a[i], b[i]);
        std::swap(da, db);
        if (db < 0) return da;
        if (db == 0) return 0; // nonzero constant
    }
#undef MUL
}

} // namespace

template <bool CLMUL>
std::uint64_t
Engine::count_affine_cubic_impl(const std::vector<std::uint32_t> c[4]) const {
    const int k = k_;
    const std::uint64_t mod = mod_, mu = mu_;
    const std::uint32_t mask = mask_;
    const std::uint32_t one = 1;
    const std::uint64_t n = 1ull << k;
#define MUL(x, y) mul_t<CLMUL>((x), (y), k, mod, mu, mask)

    // pad coefficient polys to a common degree for a branch-free Horner
    std::size_t deg = 1;
    for (int j = 0; j < 4; ++j) deg = std::max(deg, c[j].size());
    std::vector<std::uint32_t> h[4];
    for (int j = 0; j < 4; ++j) {
        h[j] = c[j];
        h[j].resize(deg, 0);
    }

    std::uint64_t total = 0;
    for (std::uint64_t xi = 0; xi < n; ++xi) {
        const std::uint32_t x = static_cast<std::uint32_t>(xi);
        std::uint32_t a = h[3][deg - 1], b = h[2][deg - 1], cc = h[1][deg - 1],
                      d = h[0][deg - 1];
        for (std::size_t i = deg - 1; i-- > 0;) {
            a = MUL(a, x) ^ h[3][i];
            b = MUL(b, x) ^ h[2][i];
            cc = MUL(cc, x) ^ h[1][i];
            d = MUL(d, x) ^ h[0][i];
        }
        if (a == 0) {
            // low-degree fall-through, rare for honest cubics
            if (b != 0) {
                if (cc == 0) {
                    total += 1; // double root of b y^2 = d
                } else {
                    // roots iff Tr(b d / cc^2) = 0
                    std::uint32_t ic = inv(cc);
                    std::uint32_t e = MUL(MUL(b, d), MUL(ic, ic));
                    if (trace(e) == 0) total += 2;
                }
            } else if (cc != 0) {
                total += 1;
            } else if (d == 0) {
                total += n; // the whole line lies on the curve
            }
            continue;
        }
        // monicize by w = a y, times a^2:  w^3 + b w^2 + (a c) w + a^2 d
        const std::uint32_t B = b, C = MUL(a, cc), D = MUL(MUL(a, a), d);
        // depress by w = v + B:  v^3 + P v + Q
        const std::uint32_t P = MUL(B, B) ^ C, Q = MUL(B, C) ^ D;
        if (Q == 0) {
            total += (P == 0) ? 1 : 2;
            continue;
        }
        // t = v^{2^k} mod (v^3 + P v + Q), starting from t = v
        std::uint32_t t2 = 0, t1 = 1, t0 = 0;
        for (int i = 0; i < k; ++i) {
            const std::uint32_t s2 = MUL(t2, t2);
            const std::uint32_t s1 = MUL(t1, t1);
            const std::uint32_t s0 = MUL(t0, t0);
            // v^4 == P v^2 + Q v
            t2 = MUL(s2, P) ^ s1;
            t1 = MUL(s2, Q);
            t0 = s0;
        }
        // r = t - v
        const std::uint32_t r2 = t2, r1 = t1 ^ one, r0 = t0;
        if ((r2 | r1 | r0) == 0) {
            total += 3;
            continue;
        }
        total += gcd_degree_cubic<CLMUL>(P, Q, r2, r1, r0, k, mod, mu, mask);
    }
#undef MUL
    return total;
}

std::uint64_t Engine::distinct_roots_deg3(std::uint32_t c3, std::uint32_t c2,
                                          std::uint32_t c1,
                                          std::uint32_t c0) const {
    const std::uint64_t n = 1ull << k_;
    if (c3 == 0) {
        if (c2 != 0) {
            if (c1 == 0) return 1;
            std::uint32_t ic = inv(c1);
            std::uint32_t e = mul(mul(c2, c0), mul(ic, ic));
            return trace(e) == 0 ? 2 : 0;
        }
        if (c1 != 0) return 1;
        return c0 == 0 ? n : 0;
    }
    const std::uint32_t B = c2, C = mul(c3, c1), D = mul(mul(c3, c3), c0);
    const std::uint32_t P = mul(B, B) ^ C, Q = mul(B, C) ^ D;
    if (Q == 0) return (P == 0) ? 1 : 2;
    std::uint32_t t2 = 0, t1 = 1, t0 = 0;
    for (int i = 0; i < k_; ++i) {
        const std::uint32_t s2 = mul(t2, t2), s1 = mul(t1, t1), s0 = mul(t0, t0);
        t2 = mul(s2, P) ^ s1;
        t1 = mul(s2, Q);
        t0 = s0;
    }
    const std::uint32_t r2 = t2, r1 = t1 ^ 1u, r0 = t0;
    if ((r2 | r1 | r0) == 0) return 3;
    if (clmul_)
        return gcd_degree_cubic<true>(P, Q, r2, r1, r0, k_, mod_, mu_, mask_);
    return gcd_degree_cubic<false>(P, Q, r2, r1, r0, k_, mod_, mu_, mask_);
}

std::uint64_t Engine::count_affine_cubic(const std::vector<std::uint32_t> c[4]) const {
    return clmul_ ? count_affine_cubic_impl<true>(c)
                  : count_affine_cubic_impl<false>(c);
}

template std::uint64_t
Engine::count_affine_cubic_impl<true>(const std::vector<std::uint32_t>[4]) const;
template std::uint64_t
Engine::count_affine_cubic_impl<false>(const std::vector<std::uint32_t>[4]) const;

} // namespace zetagcd::gf2k
