#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace stationarity {

using Rng = std::mt19937_64;

/// splitmix64 finaliser.
[[nodiscard]] constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of a sub-stream identified by a path of indices below a master seed.
[[nodiscard]] constexpr std::uint64_t derive_seed(std::uint64_t master,
                                                  std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = mix64(master);
    for (const auto p : path) h = mix64(h ^ mix64(p + 0x632be59bd9b4e019ULL));
    return h;
}

[[nodiscard]] inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

}  // namespace stationarity
