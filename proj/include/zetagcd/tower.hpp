#pragma once
#include <memory>
#include <optional>
#include <string>

#include "zetagcd/bigint.hpp"
#include "zetagcd/errors.hpp"

// Exact arithmetic for bound values too large to materialize: a value is
// an explicit integer, mult * base^exponent with tower exponent/mult, or
// a factorial of a tower.  Comparisons are exact or throw
// IncomparableAtPrecision; nothing here is floating point except the
// explicitly-named log2 *estimate* used for display.

namespace zetagcd::tower {

class TowerValue {
  public:
    enum class Kind { Int, Exp, Fact };

    // all values are nonnegative integers
    static TowerValue integer(Int n);
    // mult * base^exponent; base >= 1.  Canonicalizes: base 1 or exponent
    // 0 fold away, perfect-power bases reduce (4^e -> 2^{2e}), and values
    // that fit in a few hundred bits collapse to explicit integers.
    static TowerValue exp(const Int &base, TowerValue exponent,
                          TowerValue mult = integer(1));
    static TowerValue factorial(TowerValue arg);

    static TowerValue mul(const TowerValue &a, const TowerValue &b);

    // -1 / 0 / +1; exact, throws IncomparableAtPrecision when the
    // implemented rules cannot decide
    static int cmp(const TowerValue &a, const TowerValue &b);

    // exact evaluation when it is provably affordable; a nullopt return
    // guarantees value > 2^bit_cap
    std::optional<Int> collapse(long bit_cap = kCmpBits) const;

    // exact log2 as a TowerValue when the form allows it (2^e -> e)
    std::optional<TowerValue> log2_exact() const;

    // display-quality log2 (double); nullopt when even the log overflows
    std::optional<double> log2_estimate() const;

    std::string str() const;

    Kind kind() const { return kind_; }
    const Int &as_int() const;          // Kind::Int
    const Int &base() const;            // Kind::Exp
    const TowerValue &exponent() const; // Kind::Exp
    const TowerValue &mult() const;     // Kind::Exp
    const TowerValue &arg() const;      // Kind::Fact

    static constexpr long kAutoCollapseBits = 512;
    static constexpr long kCmpBits = 4096;

  private:
    TowerValue() = default;
    // value > 2^threshold, provably
    static bool proven_exceeds(const TowerValue &v, const Int &threshold);

    Kind kind_ = Kind::Int;
    Int n_ = 0; // Int payload, or Exp base
    std::shared_ptr<const TowerValue> e_, m_; // Exp exponent/mult; Fact arg in e_
};

Int binom(const Int &n, const Int &k);
Int factorial_int(long n);

} // namespace zetagcd::tower
