#pragma once
// Deterministic PRNG used everywhere in the simulator. We avoid <random>
// distributions because their output is implementation-defined; identical
// seeds must reproduce identical byte-level artifacts.

#include <cstdint>
#include <cmath>

namespace mazing {

// splitmix64: tiny, fast, and statistically solid for simulation purposes.
inline uint64_t splitmix64(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

class Rng {
public:
    explicit Rng(uint64_t seed = 1) : state_(seed) {}

    uint64_t next_u64() { return splitmix64(state_); }

    // Uniform in [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Unbiased integer in [0, n) via rejection.
    uint64_t uniform_int(uint64_t n) {
        if (n <= 1) return 0;
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % n;
    }

    // Standard normal via Box-Muller (no caching: consumption order stays obvious).
    double gaussian() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

    double gaussian(double mean, double sd) { return mean + sd * gaussian(); }

private:
    uint64_t state_;
};

// Derive a stream seed from a base seed and up to three identifiers
// (participant, session, purpose tag). Chained splitmix keeps streams disjoint.
inline uint64_t derive_seed(uint64_t base, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t s = base;
    splitmix64(s);
    s ^= 0x9e3779b97f4a7c15ULL * (a + 1);
    splitmix64(s);
    s ^= 0xc2b2ae3d27d4eb4fULL * (b + 1);
    splitmix64(s);
    s ^= 0x165667b19e3779f9ULL * (c + 1);
    return splitmix64(s);
}

}  // namespace mazing
