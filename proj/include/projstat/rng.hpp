#pragma once

#include <cstdint>
#include <random>

namespace projstat {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used as the seed-splitting hash.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for stream `index` under `root`: root XOR mix64(index).
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index) {
    return root ^ mix64(index);
}

inline Rng make_stream(std::uint64_t root, std::uint64_t index) {
    return Rng(derive_seed(root, index));
}

}  // namespace projstat
