#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>

namespace sgb {

// All stochastic code takes an explicit stream so runs are replayable from a
// single documented seed. mt19937_64 has a standard-specified output sequence;
// the helpers below avoid std::uniform_*_distribution, whose output is
// implementation-defined, so identical seeds give identical results across
// standard libraries.
using Rng = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform double in [0, 1) with 53 random bits.
inline double next_unit(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool bernoulli(Rng& rng, double p) {
    return next_unit(rng) < p;
}

// Unbiased integer in [0, bound), bound >= 1. Rejection sampling over the
// full 64-bit range.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound; // 2^64 mod bound
    std::uint64_t x = rng();
    while (x < threshold) x = rng();
    return x % bound;
}

// Per-run seed for experiment cell (method_index, k, horizon, rep) under a
// master seed. The chain is part of the output contract (see README) so other
// implementations can replay individual runs.
constexpr std::uint64_t derive_run_seed(std::uint64_t master_seed, std::uint64_t method_index,
                                        std::uint64_t k, std::uint64_t t_horizon,
                                        std::uint64_t rep) {
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ method_index);
    h = splitmix64(h ^ k);
    h = splitmix64(h ^ t_horizon);
    h = splitmix64(h ^ rep);
    return h;
}

// Seed for the Monte-Carlo expected-value oracle of a given action: chains the
// sorted arm ids into the oracle's base seed. Deterministic per action, so the
// oracle gives the same estimate no matter when or how often it is queried.
inline std::uint64_t derive_action_seed(std::uint64_t oracle_seed, std::span<const int> sorted_action) {
    std::uint64_t h = splitmix64(oracle_seed);
    for (int id : sorted_action) h = splitmix64(h ^ (static_cast<std::uint64_t>(id) + 1));
    return h;
}

} // namespace sgb
