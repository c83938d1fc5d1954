#pragma once

#include <cstdint>
#include <initializer_list>
#include <algorithm>
#include <cmath>
#include <random>
#include <string_view>
#include <utility>

namespace persona::util {

/// SplitMix64 finalizer; used to derive independent, reproducible streams.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Combines a base seed with any number of stream coordinates
/// (repetition, trait, family mask, ...) into one seed.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> parts) noexcept {
    std::uint64_t s = mix64(base);
    for (auto p : parts) s = mix64(s ^ mix64(p + 0x632be59bd9b4e019ULL));
    return s;
}

inline std::uint64_t hash_string(std::string_view s) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

using Rng = std::mt19937_64;

/// Uniform double in [0,1) built from 53 random bits; platform independent,
/// unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n) by rejection; platform independent.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t r;
    do { r = rng(); } while (r >= limit);
    return r % n;
}

/// Standard normal by Box-Muller on uniform01.
inline double normal01(Rng& rng) {
    double u1;
    do { u1 = uniform01(rng); } while (u1 <= 0.0);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

/// Fisher-Yates with uniform_index, so shuffles are identical across standard libraries.
template <typename It>
void shuffle(It first, It last, Rng& rng) {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
        const auto j = uniform_index(rng, i);
        std::iter_swap(first + (i - 1), first + j);
    }
}

}  // namespace persona::util
