#ifndef SYMPFACT_PRNG_HPP
#define SYMPFACT_PRNG_HPP

// Deterministic randomness. SplitMix64 gives identical streams on every
// platform (no std distributions, whose outputs are implementation-defined).
// All randomized operations take a master seed and derive per-task seeds, so
// output bytes depend only on argv + seed.

#include <cstdint>

#include "sympfact/gaussian.hpp"

namespace sympfact {

class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Inclusive range; span must fit in uint64.
    long range(long lo, long hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(next() % span);
    }

    bool chance(unsigned num, unsigned den) { return next() % den < num; }

private:
    std::uint64_t state_;
};

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
    SplitMix64 g(master ^ (0x517cc1b727220a95ULL * (salt + 1)));
    return g.next();
}

// Small random rational: numerator in [-4,4], denominator in {1,2,3}.
inline Rational random_rational(SplitMix64& g) {
    return Rational(g.range(-4, 4), g.range(1, 3));
}

inline Rational random_nonzero_rational(SplitMix64& g) {
    for (;;) {
        Rational r = random_rational(g);
        if (!r.is_zero()) return r;
    }
}

// Random Gaussian rational; roughly half the draws are real.
inline Gaussian random_gaussian(SplitMix64& g) {
    Rational re = random_rational(g);
    if (g.chance(1, 2)) return Gaussian(re);
    return Gaussian(re, random_rational(g));
}

inline Gaussian random_nonzero_gaussian(SplitMix64& g) {
    for (;;) {
        Gaussian z = random_gaussian(g);
        if (!z.is_zero()) return z;
    }
}

} // namespace sympfact

#endif // SYMPFACT_PRNG_HPP
