#pragma once
#include <cstdint>
#include <vector>

#include "zetagcd/ff.hpp"

// Bit-packed arithmetic for F_{2^k}, k <= 30, sharing the modulus of a
// FieldDesc so results agree with the generic representation.  Used by
// the point-counting hot path: counting distinct roots of a cubic in y
// for every x in the field.  Multiplication uses PCLMULQDQ with a
// two-multiply Barrett reduction when the CPU has it, and a shift-xor
// loop otherwise; both paths are exercised by tests.

namespace zetagcd::gf2k {

class Engine {
  public:
    explicit Engine(const ff::FieldDesc &F, bool allow_clmul = true);

    static bool cpu_has_clmul();

    int k() const { return k_; }
    std::uint32_t mask() const { return mask_; }
    std::uint64_t modulus_bits() const { return mod_; }

    std::uint32_t mul(std::uint32_t a, std::uint32_t b) const;
    std::uint32_t sqr(std::uint32_t a) const { return mul(a, a); }
    std::uint32_t inv(std::uint32_t a) const; // Fermat power, a != 0
    int trace(std::uint32_t a) const {
        return __builtin_parity(a & trace_mask_);
    }

    static std::uint32_t pack(const ff::Coeffs &c);
    ff::Coeffs unpack(std::uint32_t v) const;

    // number of distinct y in F_{2^k} with c3 y^3 + c2 y^2 + c1 y + c0 = 0;
    // the identically-zero polynomial counts 2^k
    std::uint64_t distinct_roots_deg3(std::uint32_t c3, std::uint32_t c2,
                                      std::uint32_t c1,
                                      std::uint32_t c0) const;

    // sum over all x in F_{2^k} of distinct_roots_deg3(c[3](x), .., c[0](x)),
    // where c[j] are coefficient vectors of polynomials in x (index = degree).
    // This is the affine point count of a y-degree<=3 plane curve chart.
    std::uint64_t count_affine_cubic(const std::vector<std::uint32_t> c[4]) const;

  private:
    int k_ = 0;
    std::uint32_t mask_ = 0;
    std::uint64_t mod_ = 0; // modulus bits incl. x^k
    std::uint64_t mu_ = 0;  // floor(x^{2k} / m) for Barrett
    std::uint32_t trace_mask_ = 0;
    bool clmul_ = false;

    template <bool CLMUL>
    std::uint64_t count_affine_cubic_impl(const std::vector<std::uint32_t> c[4]) const;
};

} // namespace zetagcd::gf2k
