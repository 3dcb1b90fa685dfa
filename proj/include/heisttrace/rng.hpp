#pragma once

#include <cstdint>
#include <random>

namespace heisttrace {

// Engine output is standardized; std distributions are not. Sampling helpers
// used in exported results go through these so identical seeds give
// identical artifacts on any platform.

// Unbiased integer in [0, n) via rejection sampling.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace heisttrace
