#pragma once

#include <cstdint>
#include <vector>

#include "sgb/random.hpp"
#include "sgb/submodularity.hpp"

namespace sgb {

struct OfflineResult {
    std::vector<int> selected; // ascending arm ids
    double value = 0.0;        // oracle value of selected
    std::int64_t evaluations = 0;
};

// Nemhauser greedy: k passes, each adding the remaining arm with the largest
// oracle value of committed ∪ {a}; ties broken by lowest arm id. Makes exactly
// sum_{i=1..k} (n - i + 1) oracle calls.
OfflineResult offline_greedy(const SetOracle& oracle, int arm_count, int k);

// Greedy restricted, in phase i, to a uniform random candidate subset of size
// compute_sample_size(arm_count, i, beta) with beta = ln(1/epsilon)/k.
// epsilon must lie in (0, 1). Deterministic per rng state.
OfflineResult offline_stochastic_greedy(const SetOracle& oracle, int arm_count, int k,
                                        double epsilon, Rng& rng);

// Exact maximizer over all subsets of size at most k, scanned in ascending
// size and lexicographic order; ties keep the lexicographically smallest set.
// Refuses instances with C(arm_count, k) > 10^6.
OfflineResult brute_force_opt(const SetOracle& oracle, int arm_count, int k);

} // namespace sgb
