#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <utility>

namespace qfames::rng {

/// SplitMix64 finalizer; full-period bijective mix on 64 bits.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Counter-based key: hash of an arbitrary tuple of integers. Results are
/// independent of evaluation order/thread schedule, which is what makes the
/// data tensors reproducible under any worker count.
inline std::uint64_t key(std::initializer_list<std::uint64_t> parts) {
    std::uint64_t h = 0x8f1bbcdcbfa53e0bULL;
    for (std::uint64_t p : parts) h = mix64(h ^ p);
    return h;
}

/// Uniform double in [0, 1) from a key.
inline double uniform(std::uint64_t k) {
    return static_cast<double>(mix64(k) >> 11) * 0x1.0p-53;
}

/// Standard-normal pair via Box-Muller, keyed.
inline std::pair<double, double> gaussian_pair(std::uint64_t k) {
    double u1 = uniform(mix64(k ^ 0x6a09e667f3bcc909ULL));
    double u2 = uniform(mix64(k ^ 0xbb67ae8584caa73bULL));
    // avoid log(0)
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

}  // namespace qfames::rng
