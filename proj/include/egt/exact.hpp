#pragma once

#include <cmath>
#include <span>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>

namespace egt {

using BigInt = boost::multiprecision::cpp_int;

/// C(n, k) as an exact integer; 0 outside the Pascal triangle.
inline BigInt binomial_exact(long n, long k) {
    if (k < 0 || k > n || n < 0) return 0;
    if (k > n - k) k = n - k;
    BigInt r = 1;
    for (long i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;  // divides exactly: r is C(n, i+1) * C-partial
    }
    return r;
}

/// Multinomial coefficient (dm1; parts...) = dm1! / prod(parts_i!),
/// computed as an incremental product of binomials so every intermediate
/// value is itself a multinomial (no overflow, exact for any size).
inline BigInt multinomial_exact(long dm1, std::span<const int> parts) {
    long sum = 0;
    for (int p : parts) {
        if (p < 0) throw std::invalid_argument("multinomial: negative part");
        sum += p;
    }
    if (sum != dm1) throw std::invalid_argument("multinomial: parts must sum to dm1");
    BigInt r = 1;
    long rest = dm1;
    for (int p : parts) {
        r *= binomial_exact(rest, p);
        rest -= p;
    }
    return r;
}

inline double multinomial(long dm1, std::span<const int> parts) {
    return multinomial_exact(dm1, parts).convert_to<double>();
}

/// Natural log of a positive exact integer, valid far beyond double range.
inline double log_exact(const BigInt& x) {
    if (x <= 0) throw std::invalid_argument("log_exact: need a positive value");
    const unsigned bits = boost::multiprecision::msb(x);
    if (bits < 900) return std::log(x.convert_to<double>());
    const BigInt top = x >> (bits - 64);
    return std::log(top.convert_to<double>()) + (bits - 64) * std::log(2.0);
}

/// log of the multinomial via lgamma; adequate for scaling work.
inline double log_multinomial(long dm1, std::span<const int> parts) {
    double v = std::lgamma(static_cast<double>(dm1) + 1.0);
    for (int p : parts) v -= std::lgamma(static_cast<double>(p) + 1.0);
    return v;
}

}  // namespace egt
