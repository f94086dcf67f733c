#ifndef LINKFIX_UTIL_HPP
#define LINKFIX_UTIL_HPP

#include <bit>
#include <cstdint>
#include <cmath>

namespace linkfix {

/// splitmix64 step. Small, fast, and good enough for reproducible
/// jitter/ray-angle sequences; not a statistical-quality generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic uniform double in [0, 1).
inline double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

/// FNV-1a over the bit pattern of a double. -0.0 and 0.0 hash alike.
inline std::uint64_t hash_combine(std::uint64_t h, double v) {
    if (v == 0.0) v = 0.0;
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) {
        h ^= (bits >> (8 * i)) & 0xffULL;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
        h ^= (v >> (8 * i)) & 0xffULL;
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

inline int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

} // namespace linkfix

#endif
