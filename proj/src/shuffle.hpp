#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace signrel::detail {

/// Fisher-Yates driven by mt19937_64. Avoids std::shuffle and
/// std::uniform_int_distribution, whose output differs between standard
/// libraries, so splits are reproducible across toolchains.
template <typename T>
void seeded_shuffle(std::vector<T>& items, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t i = items.size(); i > 1; --i) {
        std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(items[i - 1], items[j]);
    }
}

/// Seed for an independent stream derived from (seed, index), splitmix64 style.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace signrel::detail
