#pragma once

#include <cstdint>

namespace qwgtlab {

/// splitmix64. Seeded draws must reproduce bit-identically across platforms
/// and standard libraries, which rules out the std distribution objects.
struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    std::uint64_t below(std::uint64_t n) { return next() % n; }

    long range(long lo, long hi) { return lo + static_cast<long>(below(hi - lo + 1)); }

    bool bit() { return next() & 1u; }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
};

} // namespace qwgtlab
