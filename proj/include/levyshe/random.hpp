#pragma once

#include <cstdint>
#include <random>

namespace levyshe {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed of replica `index` under `master`. Depends only on the pair, never on scheduling.
[[nodiscard]] constexpr std::uint64_t replica_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ (index * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
}

/// Independent sub-stream of a replica seed (e.g. environment vs spine vs Brownian path).
[[nodiscard]] constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
    return splitmix64(seed + 0x632be59bd9b4e019ULL * (stream + 1));
}

[[nodiscard]] inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

/// Uniform draw in [0, 1).
[[nodiscard]] inline double uniform01(Rng& rng) {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

} // namespace levyshe
