#ifndef QECFORGE_UTIL_RNG_H
#define QECFORGE_UTIL_RNG_H

#include <cmath>
#include <cstdint>

namespace qecforge {

// Counter-based randomness: every draw is a pure function of
// (seed, stream, counter). Shots and threads can draw independently
// without shared state, which keeps batched runs reproducible no matter
// how the work is split.

inline uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t keyed_u64(uint64_t seed, uint64_t stream, uint64_t counter) {
    uint64_t h = mix64(seed ^ 0x243f6a8885a308d3ULL);
    h = mix64(h ^ stream);
    h = mix64(h ^ counter);
    return h;
}

// Uniform in [0, 1).
inline double keyed_unit(uint64_t seed, uint64_t stream, uint64_t counter) {
    return (double)(keyed_u64(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller. Deterministic across platforms, unlike
// std::normal_distribution.
inline double keyed_gauss(uint64_t seed, uint64_t stream, uint64_t counter) {
    double u1 = keyed_unit(seed, stream, 2 * counter);
    double u2 = keyed_unit(seed, stream, 2 * counter + 1);
    if (u1 < 1e-300) {
        u1 = 1e-300;
    }
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// Stateful convenience wrapper around the keyed generator.
struct CounterRng {
    uint64_t seed;
    uint64_t stream;
    uint64_t counter = 0;

    CounterRng(uint64_t seed, uint64_t stream) : seed(seed), stream(stream) {}

    uint64_t next_u64() {
        return keyed_u64(seed, stream, counter++);
    }
    double next_unit() {
        return keyed_unit(seed, stream, counter++);
    }
    bool next_bernoulli(double p) {
        return next_unit() < p;
    }
    // Uniform integer in [0, n).
    uint64_t next_below(uint64_t n) {
        return next_u64() % n;
    }
};

}  // namespace qecforge

#endif
