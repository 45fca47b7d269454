#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace sparsereg {

// SplitMix64 finalizer. Used to derive independent RNG streams from a base
// seed plus contextual tags (fold index, grid value, scheme id) so that the
// stream a task sees does not depend on evaluation order.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a = 0,
                                 std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t s = mix64(base);
    s = mix64(s ^ mix64(a ^ 0x1ULL));
    s = mix64(s ^ mix64(b ^ 0x2ULL));
    s = mix64(s ^ mix64(c ^ 0x3ULL));
    return s;
}

inline std::uint64_t double_bits(double v) { return std::bit_cast<std::uint64_t>(v); }

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

// Numerically stable logistic function. Result is clamped into the open
// interval (0, 1) so callers can take logs or divide by 1 - p safely.
inline double sigmoid(double eta) {
    double p;
    if (eta >= 0.0) {
        p = 1.0 / (1.0 + std::exp(-eta));
    } else {
        const double e = std::exp(eta);
        p = e / (1.0 + e);
    }
    constexpr double lo = 1e-300;
    const double hi = 1.0 - 2.220446049250313e-16;  // 1 - eps
    if (p < lo) p = lo;
    if (p > hi) p = hi;
    return p;
}

// log(1 + exp(eta)) without overflow for |eta| up to ~700.
inline double softplus(double eta) {
    if (eta > 0.0) return eta + std::log1p(std::exp(-eta));
    return std::log1p(std::exp(eta));
}

inline double logit(double p) { return std::log(p / (1.0 - p)); }

}  // namespace sparsereg
