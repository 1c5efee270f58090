#pragma once

#include <cmath>
#include <cstdint>

namespace egt {

// Counter-based randomness: every draw is a pure function of
// (seed, stream, counter), so sampling is reproducible no matter how the
// work is chunked across threads.

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline constexpr std::uint64_t counter_hash(std::uint64_t seed, std::uint64_t stream,
                                            std::uint64_t counter) {
    return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter);
}

/// Uniform in the open interval (0, 1); never returns an endpoint.
inline double unit_open(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

/// Standard normal draw at (seed, stream, counter) via Box-Muller.
inline double gaussian_at(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u1 = unit_open(counter_hash(seed, stream, 2 * counter));
    const double u2 = unit_open(counter_hash(seed, stream, 2 * counter + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace egt
