#include "zetagcd/tower.hpp"

#include <cmath>
#include <sstream>

namespace zetagcd::tower {

namespace {

long bit_length(const Int &n) { // bits of n > 0
    return (long)boost::multiprecision::msb(n) + 1;
}

// largest j with c^j == b for minimal c >= 2 (perfect-power reduction)
std::pair<Int, long> smallest_power_base(const Int &b) {
    long maxj = bit_length(b) - 1; // b >= 2^j needs j <= log2 b
    for (long j = maxj; j >= 2; --j) {
        // candidate c = round(b^{1/j}) via integer Newton on j-th root
        Int lo = 1, hi = Int(1) << (maxj / j + 1);
        while (lo < hi) {
            Int mid = (lo + hi + 1) / 2;
            if (ipow(mid, (unsigned long)j) <= b)
                lo = mid;
            else
                hi = mid - 1;
        }
        if (ipow(lo, (unsigned long)j) == b) return {lo, j};
    }
    return {b, 1};
}

double log2_of_int(const Int &n) { // n > 0
    long bits = bit_length(n);
    if (bits <= 60) return std::log2(n.convert_to<double>());
    Int top = n >> (bits - 53);
    return std::log2(top.convert_to<double>()) + (double)(bits - 53);
}

} // namespace

Int binom(const Int &n, const Int &k) {
    if (k < 0 || k > n) return 0;
    Int kk = k <= n - k ? k : Int(n - k);
    Int r = 1;
    for (Int i = 1; i <= kk; ++i) {
        r *= n - kk + i;
        r /= i; // exact at each step
    }
    return r;
}

Int factorial_int(long n) {
    Int r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

const Int &TowerValue::as_int() const {
    if (kind_ != Kind::Int) throw std::logic_error("tower: not an Int node");
    return n_;
}
const Int &TowerValue::base() const {
    if (kind_ != Kind::Exp) throw std::logic_error("tower: not an Exp node");
    return n_;
}
const TowerValue &TowerValue::exponent() const {
    if (kind_ != Kind::Exp) throw std::logic_error("tower: not an Exp node");
    return *e_;
}
const TowerValue &TowerValue::mult() const {
    if (kind_ != Kind::Exp) throw std::logic_error("tower: not an Exp node");
    return *m_;
}
const TowerValue &TowerValue::arg() const {
    if (kind_ != Kind::Fact) throw std::logic_error("tower: not a Fact node");
    return *e_;
}

TowerValue TowerValue::integer(Int n) {
    if (n < 0) throw InputError("tower: negative values are not supported");
    TowerValue v;
    v.kind_ = Kind::Int;
    v.n_ = std::move(n);
    return v;
}

TowerValue TowerValue::exp(const Int &base, TowerValue exponent,
                           TowerValue mult) {
    if (base < 1) throw InputError("tower: exp base must be >= 1");
    if (base == 1) return mult;

    auto [b, j] = smallest_power_base(base);
    if (j > 1) exponent = mul(exponent, integer(j));

    // exponent 0 folds away
    if (auto ce = exponent.collapse(kAutoCollapseBits)) {
        if (*ce == 0) return mult;
        // absorb an explicit power-of-base multiplier into the exponent
        if (auto cm = mult.collapse(kAutoCollapseBits)) {
            if (*cm == 0) return integer(0);
            Int m = *cm;
            long extra = 0;
            while (m % b == 0) {
                m /= b;
                ++extra;
            }
            if (extra > 0) {
                exponent = integer(*ce + extra);
                mult = integer(m);
                ce = exponent.collapse(kAutoCollapseBits);
            }
            // small enough -> explicit
            long bb = bit_length(b);
            if (*ce * bb + bit_length(m) <= kAutoCollapseBits)
                return integer(ipow(b, ce->convert_to<unsigned long>()) * m);
        }
    }

    TowerValue v;
    v.kind_ = Kind::Exp;
    v.n_ = b;
    v.e_ = std::make_shared<TowerValue>(std::move(exponent));
    v.m_ = std::make_shared<TowerValue>(std::move(mult));
    return v;
}

TowerValue TowerValue::factorial(TowerValue a) {
    if (auto ca = a.collapse(kAutoCollapseBits)) {
        if (*ca <= 96) // 96! still fits the auto-collapse budget
            return integer(factorial_int(ca->convert_to<long>()));
    }
    TowerValue v;
    v.kind_ = Kind::Fact;
    v.e_ = std::make_shared<TowerValue>(std::move(a));
    return v;
}

TowerValue TowerValue::mul(const TowerValue &a, const TowerValue &b) {
    if (a.kind_ == Kind::Int && b.kind_ == Kind::Int)
        return integer(a.n_ * b.n_);
    if (a.kind_ == Kind::Int) return mul(b, a);
    if (a.kind_ == Kind::Exp) {
        if (b.kind_ == Kind::Exp && a.n_ == b.n_) {
            auto ea = a.e_->collapse(kAutoCollapseBits);
            auto eb = b.e_->collapse(kAutoCollapseBits);
            if (ea && eb)
                return exp(a.n_, integer(*ea + *eb), mul(*a.m_, *b.m_));
        }
        return exp(a.n_, *a.e_, mul(*a.m_, b));
    }
    throw std::logic_error("tower: unsupported mul operands");
}

std::optional<Int> TowerValue::collapse(long bit_cap) const {
    switch (kind_) {
    case Kind::Int:
        return n_;
    case Kind::Exp: {
        auto ce = e_->collapse(bit_cap);
        if (!ce) return std::nullopt; // exponent > 2^cap => value certainly is
        long fl = bit_length(n_) - 1; // base >= 2^fl
        if (*ce * fl > bit_cap) return std::nullopt; // value >= 2^{e*fl}
        auto cm = m_->collapse(bit_cap);
        if (!cm) return std::nullopt;
        return ipow(n_, ce->convert_to<unsigned long>()) * *cm;
    }
    case Kind::Fact: {
        auto ca = e_->collapse(bit_cap);
        if (!ca) return std::nullopt;          // a > 2^cap and a! >= a
        if (*ca - 1 > bit_cap) return std::nullopt; // a! >= 2^{a-1} > 2^cap
        return factorial_int(ca->convert_to<long>());
    }
    }
    return std::nullopt;
}

bool TowerValue::proven_exceeds(const TowerValue &v, const Int &threshold) {
    // does v > 2^threshold certainly hold?
    switch (v.kind_) {
    case Kind::Int:
        if (threshold > 8 * 1024 * 1024) return false; // refuse huge shifts
        return v.n_ > (Int(1) << threshold.convert_to<unsigned long>());
    case Kind::Exp: {
        auto ce = v.e_->collapse(kCmpBits);
        if (!ce) return true; // e > 2^4096 dwarfs any materialized threshold
        long fl = bit_length(v.n_) - 1;
        if (*ce * fl > threshold) return true; // v >= 2^{e*fl} * m, m >= 1
        return proven_exceeds(*v.m_, threshold - *ce * fl);
    }
    case Kind::Fact: {
        auto ca = v.e_->collapse(kCmpBits);
        if (!ca) return true;
        return *ca - 1 > threshold; // a! >= 2^{a-1}
    }
    }
    return false;
}

int TowerValue::cmp(const TowerValue &a, const TowerValue &b) {
    auto ca = a.collapse(kCmpBits);
    auto cb = b.collapse(kCmpBits);
    if (ca && cb) return *ca < *cb ? -1 : (*ca > *cb ? 1 : 0);
    // one side explicit: the other certainly exceeds 2^kCmpBits
    if (ca && !cb) {
        if (*ca == 0 || bit_length(*ca) <= kCmpBits) return -1;
        if (proven_exceeds(b, Int(bit_length(*ca)))) return -1;
        throw IncomparableAtPrecision("tower cmp: explicit side too large");
    }
    if (!ca && cb) {
        if (*cb == 0 || bit_length(*cb) <= kCmpBits) return 1;
        if (proven_exceeds(a, Int(bit_length(*cb)))) return 1;
        throw IncomparableAtPrecision("tower cmp: explicit side too large");
    }

    // both sides exceed 2^kCmpBits
    if (a.kind_ == Kind::Exp && b.kind_ == Kind::Exp && a.n_ == b.n_) {
        auto ea = a.e_->collapse(kCmpBits), eb = b.e_->collapse(kCmpBits);
        auto ma = a.m_->collapse(kCmpBits), mb = b.m_->collapse(kCmpBits);
        if (ea && eb && ma && mb) {
            // compare m1 against b^{e2-e1} * m2 exactly
            Int E1 = *ea, E2 = *eb, M1 = *ma, M2 = *mb;
            int flip = 1;
            if (E1 > E2) {
                std::swap(E1, E2);
                std::swap(M1, M2);
                flip = -1;
            }
            Int D = E2 - E1;
            long fl = bit_length(a.n_) - 1;
            if (D * fl >= bit_length(M1)) return -flip; // b^D*M2 >= 2^bits(M1) > M1
            Int rhs = ipow(a.n_, D.convert_to<unsigned long>()) * M2;
            return M1 < rhs ? -flip : (M1 > rhs ? flip : 0);
        }
        // structural recursion on exponent and multiplier
        std::optional<int> ce, cm;
        try {
            ce = cmp(*a.e_, *b.e_);
        } catch (const IncomparableAtPrecision &) {
        }
        try {
            cm = cmp(*a.m_, *b.m_);
        } catch (const IncomparableAtPrecision &) {
        }
        if (ce && cm) {
            if (*ce == 0) return *cm;
            if (*cm == 0 || (*ce > 0) == (*cm > 0)) return *ce;
        }
        throw IncomparableAtPrecision("tower cmp: mixed same-base ordering");
    }
    if (a.kind_ == Kind::Fact && b.kind_ == Kind::Fact) {
        // both args exceed 2000, where factorial is strictly monotone
        return cmp(*a.e_, *b.e_);
    }
    throw IncomparableAtPrecision("tower cmp: no rule for these forms");
}

std::optional<TowerValue> TowerValue::log2_exact() const {
    switch (kind_) {
    case Kind::Int: {
        if (n_ < 1) return std::nullopt;
        Int v = n_;
        long e = 0;
        while (v % 2 == 0) {
            v /= 2;
            ++e;
        }
        if (v != 1) return std::nullopt;
        return integer(e);
    }
    case Kind::Exp: {
        if (n_ != 2) return std::nullopt;
        auto lm = m_->log2_exact();
        if (!lm) return std::nullopt;
        auto clm = lm->collapse(kAutoCollapseBits);
        if (clm && *clm == 0) return *e_;
        auto ce = e_->collapse(kAutoCollapseBits);
        if (ce && clm) return integer(*ce + *clm);
        return std::nullopt;
    }
    case Kind::Fact:
        return std::nullopt;
    }
    return std::nullopt;
}

std::optional<double> TowerValue::log2_estimate() const {
    switch (kind_) {
    case Kind::Int:
        if (n_ == 0) return std::nullopt;
        return log2_of_int(n_);
    case Kind::Exp: {
        auto le = e_->log2_estimate();
        if (!le) return std::nullopt;
        double ev = std::exp2(*le); // value of the exponent
        if (!std::isfinite(ev)) return std::nullopt;
        auto lm = m_->log2_estimate();
        if (!lm) return std::nullopt; // canonical Exp mult is never zero
        double r = ev * log2_of_int(n_) + *lm;
        if (!std::isfinite(r)) return std::nullopt;
        return r;
    }
    case Kind::Fact: {
        auto ca = e_->collapse(kCmpBits);
        if (!ca) return std::nullopt;
        double av = ca->convert_to<double>();
        if (!std::isfinite(av)) return std::nullopt;
        double r = std::lgamma(av + 1.0) / std::log(2.0);
        if (!std::isfinite(r)) return std::nullopt;
        return r;
    }
    }
    return std::nullopt;
}

std::string TowerValue::str() const {
    std::ostringstream os;
    switch (kind_) {
    case Kind::Int:
        os << n_;
        break;
    case Kind::Exp: {
        auto cm = m_->collapse(kAutoCollapseBits);
        if (!(cm && *cm == 1)) os << m_->str() << " * ";
        os << n_ << "^";
        if (e_->kind_ == Kind::Int)
            os << e_->str();
        else
            os << "(" << e_->str() << ")";
        break;
    }
    case Kind::Fact:
        if (e_->kind_ == Kind::Int)
            os << e_->str() << "!";
        else
            os << "(" << e_->str() << ")!";
        break;
    }
    return os.str();
}

} // namespace zetagcd::tower
