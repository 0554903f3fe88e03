#pragma once
#include <cstdint>

// Deterministic randomness.  Every stochastic operation takes a single
// 64-bit seed; independent sub-tasks (trials, samples, retries) use
// seeds derived by the counter-hash scheme
//
//     derive_seed(master, i) = splitmix64_mix(master + (i+1)*0x9E3779B97F4A7C15)
//
// so results are reproducible and independent of scheduling or worker
// count: worker w handling task i always uses derive_seed(master, i).
// Draws come from a splitmix64 stream with rejection sampling for
// bounded values -- no standard-library distributions, whose outputs
// are implementation-defined.

namespace zetagcd {

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    return splitmix64_mix(master + (counter + 1) * 0x9E3779B97F4A7C15ull);
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ull;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // uniform in [0, n), n >= 1, by rejection on the top multiple of n
    std::uint64_t below(std::uint64_t n) {
        std::uint64_t limit = ~0ull - ~0ull % n;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return v % n;
    }

    double unit() { // [0,1), 53-bit
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

} // namespace zetagcd
