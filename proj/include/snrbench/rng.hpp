#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace snrbench {

using Rng = std::mt19937_64;

/// One step of the split-mix 64 generator. Used as a cheap, well-mixed hash.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives a child seed from a master seed and a canonical key string.
/// The result depends only on (master, key), never on call order.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::string_view key) noexcept {
    std::uint64_t h = splitmix64(master);
    for (unsigned char c : key) {
        h = splitmix64(h ^ c);
    }
    return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

}  // namespace snrbench
