#pragma once

#include <cstdint>

namespace fockzero {

/// SplitMix64 output function (Steele, Lea, Flood).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Counter-based stream: the value at position `counter` depends only on (key, counter).
/// Equivalent to reading a SplitMix64 stream whose starting state is mix64(key).
constexpr std::uint64_t counter_hash(std::uint64_t key, std::uint64_t counter) noexcept {
    constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ULL;
    return mix64(mix64(key) + golden_gamma * (counter + 1));
}

/// Uniform double in [0, 1) with 53 random bits.
constexpr double counter_uniform(std::uint64_t key, std::uint64_t counter) noexcept {
    return static_cast<double>(counter_hash(key, counter) >> 11) * 0x1.0p-53;
}

}  // namespace fockzero
