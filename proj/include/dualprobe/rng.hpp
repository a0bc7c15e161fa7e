#pragma once

#include <cstdint>

namespace dualprobe::rng {

// Counter-based pseudorandom words: every word is a pure function of
// (seed, index, block), so samples can be drawn in any order, by any number
// of workers, and still tally to identical results.

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

constexpr std::uint64_t word(std::uint64_t seed, std::uint64_t index, std::uint64_t block = 0) {
    std::uint64_t x = mix64(seed + kGamma);
    x = mix64(x + index * kGamma);
    return mix64(x + block * kGamma);
}

// Bit b (0-based) of the infinite bit stream attached to (seed, index).
constexpr bool bit(std::uint64_t seed, std::uint64_t index, std::uint64_t b) {
    return (word(seed, index, b >> 6) >> (b & 63)) & 1u;
}

// Uniform integer in [0, bound) by rejection; bound >= 1.
inline std::uint64_t below(std::uint64_t seed, std::uint64_t index, std::uint64_t block,
                           std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t salt = 0;
    for (;;) {
        const std::uint64_t w = word(seed, index, block + (salt << 32));
        if (w < limit || limit == 0) return w % bound;
        ++salt;
    }
}

}  // namespace dualprobe::rng
