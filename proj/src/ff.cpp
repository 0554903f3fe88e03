#include "zetagcd/ff.hpp"

#include <algorithm>

#include "zetagcd/fqpoly.hpp"
#include "zetagcd/rng.hpp"

namespace zetagcd::ff {

namespace {

std::int64_t mod_p(std::int64_t v, std::int64_t p) {
    v %= p;
    return v < 0 ? v + p : v;
}

// extended Euclid on int64 residues
std::int64_t inv_mod_p(std::int64_t a, std::int64_t p) {
    std::int64_t t = 0, nt = 1, r = p, nr = mod_p(a, p);
    while (nr != 0) {
        std::int64_t q = r / nr;
        std::tie(t, nt) = std::pair{nt, t - q * nt};
        std::tie(r, nr) = std::pair{nr, r - q * nr};
    }
    if (r != 1) throw DivisionByZero("residue not invertible");
    return mod_p(t, p);
}

// dense polynomial arithmetic over F_p on int64 vectors (little-endian)
using PP = std::vector<std::int64_t>;

PP pp_trim(PP f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
    return f;
}

PP pp_mul(const PP &a, const PP &b, std::int64_t p) {
    if (a.empty() || b.empty()) return {};
    PP r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    }
    return pp_trim(std::move(r));
}

PP pp_mod(PP a, const PP &m, std::int64_t p) {
    std::int64_t lead_inv = inv_mod_p(m.back(), p);
    while (a.size() >= m.size()) {
        std::int64_t c = a.back() % p;
        if (c != 0) {
            std::int64_t f = (c * lead_inv) % p;
            std::size_t off = a.size() - m.size();
            for (std::size_t i = 0; i < m.size(); ++i)
                a[off + i] = mod_p(a[off + i] - f * m[i], p);
        }
        a.pop_back();
        while (!a.empty() && a.back() == 0) a.pop_back();
    }
    return a;
}

PP pp_gcd(PP a, PP b, std::int64_t p) {
    a = pp_trim(std::move(a));
    b = pp_trim(std::move(b));
    while (!b.empty()) {
        PP r = pp_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

PP pp_powmod(PP base, std::int64_t e, const PP &m, std::int64_t p) {
    PP r = {1};
    base = pp_mod(std::move(base), m, p);
    while (e) {
        if (e & 1) r = pp_mod(pp_mul(r, base, p), m, p);
        base = pp_mod(pp_mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

} // namespace

bool is_prime_i64(std::int64_t n) {
    if (n < 2) return false;
    for (std::int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool irreducible_mod_p(const Coeffs &f, std::int64_t p) {
    PP fp = pp_trim(f);
    int k = static_cast<int>(fp.size()) - 1;
    if (k < 1) return false;
    if (k == 1) return true;
    if (fp[0] == 0) return false; // x divides
    PP t = {0, 1};                // x
    for (int j = 1; 2 * j <= k; ++j) {
        t = pp_powmod(std::move(t), p, fp, p); // x^{p^j} mod f
        PP d = t;
        if (d.size() < 2) d.resize(2, 0);
        d[1] = mod_p(d[1] - 1, p); // x^{p^j} - x
        if (pp_gcd(fp, pp_trim(std::move(d)), p).size() != 1) return false;
    }
    return true;
}

FieldPtr field_make(std::int64_t p, int k, std::uint64_t seed) {
    if (!is_prime_i64(p)) throw NotPrime("p is not prime: " + std::to_string(p));
    if (p >= (1 << 20)) throw InputError("prime exceeds the 2^20 desk cap");
    if (k < 1) throw DegreeZero("extension degree must be >= 1");

    auto F = std::make_shared<FieldDesc>();
    F->p = p;
    F->k = k;
    F->seed = seed;

    Int total = ipow(Int(p), static_cast<unsigned long>(k));
    Int start = Int(seed) % total;
    for (Int j = 0; j < total; ++j) {
        Int idx = start + j;
        if (idx >= total) idx -= total;
        Coeffs cand(k + 1, 0);
        cand[k] = 1;
        Int rest = idx;
        for (int i = 0; i < k; ++i) {
            cand[i] = static_cast<std::int64_t>(rest % p);
            rest /= p;
        }
        if (irreducible_mod_p(cand, p)) {
            F->modulus = std::move(cand);
            return F;
        }
    }
    throw std::runtime_error("no irreducible modulus found"); // unreachable
}

bool FieldDesc::q_fits_u64() const {
    return q() <= Int(~0ull);
}

std::uint64_t FieldDesc::q_u64() const {
    return static_cast<std::uint64_t>(q());
}

Coeffs FieldDesc::one() const {
    Coeffs r(k, 0);
    r[0] = 1 % p;
    return r;
}

Coeffs FieldDesc::from_int(Int n) const {
    Coeffs r(k, 0);
    Int v = n % p;
    if (v < 0) v += p;
    r[0] = static_cast<std::int64_t>(v);
    return r;
}

Coeffs FieldDesc::gen() const {
    Coeffs r(k, 0);
    if (k == 1) {
        // x == -modulus[0] in F_p[x]/(x + m0)
        r[0] = mod_p(-modulus[0], p);
    } else {
        r[1] = 1;
    }
    return r;
}

bool FieldDesc::is_zero(const Coeffs &a) const {
    return std::all_of(a.begin(), a.end(), [](std::int64_t v) { return v == 0; });
}

Coeffs FieldDesc::add(const Coeffs &a, const Coeffs &b) const {
    Coeffs r(k);
    for (int i = 0; i < k; ++i) {
        r[i] = a[i] + b[i];
        if (r[i] >= p) r[i] -= p;
    }
    return r;
}

Coeffs FieldDesc::sub(const Coeffs &a, const Coeffs &b) const {
    Coeffs r(k);
    for (int i = 0; i < k; ++i) {
        r[i] = a[i] - b[i];
        if (r[i] < 0) r[i] += p;
    }
    return r;
}

Coeffs FieldDesc::neg(const Coeffs &a) const {
    Coeffs r(k);
    for (int i = 0; i < k; ++i) r[i] = a[i] == 0 ? 0 : p - a[i];
    return r;
}

Coeffs FieldDesc::mul(const Coeffs &a, const Coeffs &b) const {
    // schoolbook product then reduction by the monic modulus
    std::vector<std::int64_t> prod(2 * k - 1, 0);
    for (int i = 0; i < k; ++i) {
        if (a[i] == 0) continue;
        for (int j = 0; j < k; ++j)
            prod[i + j] = (prod[i + j] + a[i] * b[j]) % p;
    }
    for (int i = 2 * k - 2; i >= k; --i) {
        std::int64_t c = prod[i];
        if (c == 0) continue;
        prod[i] = 0;
        for (int j = 0; j < k; ++j)
            prod[i - k + j] = mod_p(prod[i - k + j] - c * modulus[j], p);
    }
    prod.resize(k);
    return prod;
}

Coeffs FieldDesc::inv(const Coeffs &a) const {
    if (is_zero(a)) throw DivisionByZero("inverse of zero");
    // extended Euclid in F_p[x] against the modulus
    PP r = modulus, nr = pp_trim(a);
    PP t = {}, nt = {1};
    while (!nr.empty()) {
        // r = q*nr + rem
        PP q, rem = r;
        std::int64_t li = inv_mod_p(nr.back(), p);
        q.assign(rem.size() > nr.size() ? rem.size() - nr.size() + 1 : 1, 0);
        while (rem.size() >= nr.size() && !rem.empty()) {
            std::int64_t c = (rem.back() * li) % p;
            std::size_t off = rem.size() - nr.size();
            if (c != 0) {
                q[off] = c;
                for (std::size_t i = 0; i < nr.size(); ++i)
                    rem[off + i] = mod_p(rem[off + i] - c * nr[i], p);
            }
            rem.pop_back();
            while (!rem.empty() && rem.back() == 0) rem.pop_back();
        }
        PP nnt = t;
        PP qnt = pp_mul(q, nt, p);
        nnt.resize(std::max(nnt.size(), qnt.size()), 0);
        for (std::size_t i = 0; i < qnt.size(); ++i)
            nnt[i] = mod_p(nnt[i] - qnt[i], p);
        t = std::move(nt);
        nt = pp_trim(std::move(nnt));
        r = std::move(nr);
        nr = std::move(rem);
    }
    if (r.size() != 1) throw DivisionByZero("element not invertible");
    std::int64_t s = inv_mod_p(r[0], p);
    Coeffs out(k, 0);
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = (t[i] * s) % p;
    return out;
}

Coeffs FieldDesc::pow(const Coeffs &a, const Int &e) const {
    if (e < 0) return pow(inv(a), -e);
    Coeffs base = a, r = one();
    Int m = e;
    while (m > 0) {
        if ((m & 1) != 0) r = mul(r, base);
        base = mul(base, base);
        m >>= 1;
    }
    return r;
}

Int FieldDesc::key(const Coeffs &a) const {
    Int r = 0;
    for (int i = k - 1; i >= 0; --i) r = r * p + a[i];
    return r;
}

Coeffs FieldDesc::unkey(Int key) const {
    Coeffs r(k, 0);
    for (int i = 0; i < k; ++i) {
        r[i] = static_cast<std::int64_t>(key % p);
        key /= p;
    }
    return r;
}

std::string FieldDesc::str(const Coeffs &a) const {
    std::string s = "[";
    for (int i = 0; i < k; ++i) {
        if (i) s += ",";
        s += std::to_string(a[i]);
    }
    return s + "]";
}

std::vector<FieldElem> field_enumerate(const FieldPtr &F, std::uint64_t cap,
                                       unsigned chunk, unsigned nchunks) {
    Int q = F->q();
    if (q > cap)
        throw EnumerationCapExceeded("field size " + q.str() +
                                     " exceeds enumeration cap");
    std::uint64_t n = static_cast<std::uint64_t>(q);
    std::uint64_t lo = n * chunk / nchunks, hi = n * (chunk + 1) / nchunks;
    std::vector<FieldElem> out;
    out.reserve(hi - lo);
    for (std::uint64_t i = lo; i < hi; ++i)
        out.push_back({F, F->unkey(Int(i))});
    return out;
}

FieldElem Embedding::map(const FieldElem &a) const {
    if (!a.F->same(*small)) throw FieldMismatch("element not in source field");
    Coeffs acc = big->zero();
    for (int i = small->k - 1; i >= 0; --i) {
        acc = big->mul(acc, gen_image.c);
        Coeffs cst = big->from_int(a.c[i]);
        acc = big->add(acc, cst);
    }
    return {big, acc};
}

Embedding embed(const FieldPtr &small, const FieldPtr &big,
                std::uint64_t seed) {
    if (small->p != big->p) throw FieldMismatch("different characteristics");
    if (big->k % small->k != 0)
        throw InputError("no subfield embedding: degree does not divide");
    // roots of the small modulus in the big field
    std::vector<FieldElem> mod_coeffs;
    mod_coeffs.reserve(small->modulus.size());
    for (std::int64_t c : small->modulus)
        mod_coeffs.push_back(make_elem(big, Int(c)));
    auto roots = univariate_roots(mod_coeffs, seed);
    if (roots.empty()) throw std::runtime_error("modulus has no root upstairs");
    std::sort(roots.begin(), roots.end(),
              [](const FieldElem &a, const FieldElem &b) { return a.key() < b.key(); });
    return Embedding{small, big, roots[seed % roots.size()]};
}

// ---------------------------------------------------------------- roots

namespace {

using fqpoly::Poly;

void push_root_with_multiplicity(const FieldDesc &F, Poly &f, const Coeffs &r,
                                 std::vector<Coeffs> &out) {
    Poly lin = {F.neg(r), F.one()}; // x - r
    for (;;) {
        auto [q, rem] = fqpoly::divmod(F, f, lin);
        if (!fqpoly::is_zero(rem)) break;
        out.push_back(r);
        f = std::move(q);
        if (fqpoly::deg(f) == 0) break;
    }
}

// distinct roots of a product of distinct linear monic factors
void split_linear_product(const FieldDesc &F, const Poly &g, Rng &rng,
                          std::vector<Coeffs> &out) {
    int d = fqpoly::deg(g);
    if (d <= 0) return;
    if (d == 1) {
        // monic x + c -> root -c
        out.push_back(F.neg(g[0]));
        return;
    }
    Int q = ipow(Int(F.p), static_cast<unsigned long>(F.k));
    for (int attempt = 0; attempt < 128; ++attempt) {
        Poly h;
        if (F.p == 2) {
            // trace splitter: T(c x) = sum_{i<log2 q} (c x)^{2^i} mod g
            Coeffs c = F.unkey(Int(rng.next()) % q);
            if (F.is_zero(c)) continue;
            Poly cx = {F.zero(), c};
            Poly t = cx, acc = cx;
            int m = F.k; // q = 2^k
            for (int i = 1; i < m; ++i) {
                t = fqpoly::mulmod(F, t, t, g);
                acc = fqpoly::add(F, acc, t);
            }
            h = fqpoly::gcd(F, g, acc);
        } else {
            // gcd(g, (x + delta)^{(q-1)/2} - 1)
            Coeffs delta = F.unkey(Int(rng.next()) % q);
            Poly shift = {delta, F.one()};
            Poly t = fqpoly::powmod(F, shift, (q - 1) / 2, g);
            t = fqpoly::sub(F, t, fqpoly::one(F));
            h = fqpoly::gcd(F, g, t);
        }
        int dh = fqpoly::deg(h);
        if (dh > 0 && dh < d) {
            split_linear_product(F, h, rng, out);
            split_linear_product(F, fqpoly::exact_div(F, g, h), rng, out);
            return;
        }
    }
    throw std::runtime_error("root splitting failed to make progress");
}

} // namespace

std::vector<FieldElem> univariate_roots(const std::vector<FieldElem> &f,
                                        std::uint64_t seed) {
    if (f.empty()) throw ZeroInput("root finding on the zero polynomial");
    const FieldPtr F = f[0].F;
    for (const auto &c : f)
        if (!c.F->same(*F)) throw FieldMismatch("mixed-field coefficients");

    Poly poly;
    poly.reserve(f.size());
    for (const auto &c : f) poly.push_back(c.c);
    poly = fqpoly::trim(*F, std::move(poly));
    if (fqpoly::is_zero(poly))
        throw ZeroInput("root finding on the zero polynomial");

    std::vector<Coeffs> found;
    Int q = F->q();
    if (q <= (Int(1) << 16)) {
        // evaluation scan; multiplicities by repeated division
        Poly work = poly;
        std::uint64_t n = static_cast<std::uint64_t>(q);
        for (std::uint64_t i = 0; i < n && fqpoly::deg(work) > 0; ++i) {
            Coeffs x = F->unkey(Int(i));
            if (F->is_zero(fqpoly::eval(*F, work, x)))
                push_root_with_multiplicity(*F, work, x, found);
        }
    } else {
        // gcd splitting: g = gcd(f, x^q - x) is the distinct-root part
        Poly base = {F->zero(), F->one()};
        Poly xq = fqpoly::powmod(*F, base, q, poly);
        Poly diff = fqpoly::sub(*F, xq, base);
        Poly g = fqpoly::gcd(*F, poly, diff);
        Rng rng(derive_seed(seed, 0x726f6f74));
        std::vector<Coeffs> distinct;
        split_linear_product(*F, g, rng, distinct);
        Poly work = poly;
        for (const auto &r : distinct)
            push_root_with_multiplicity(*F, work, r, found);
    }

    std::vector<FieldElem> out;
    out.reserve(found.size());
    for (auto &r : found) out.push_back({F, std::move(r)});
    std::sort(out.begin(), out.end(), [](const FieldElem &a, const FieldElem &b) {
        return a.key() < b.key();
    });
    return out;
}

} // namespace zetagcd::ff
