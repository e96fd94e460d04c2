#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sgb/random.hpp"

namespace sgb {

// Full schedule governing one explore-then-commit run over n base arms with
// cardinality k and horizon T. All logarithms are natural.
struct BanditParams {
    int n = 0;                    // number of base arms
    int k = 0;                    // cardinality constraint
    std::int64_t t_horizon = 0;   // time horizon T
    double epsilon = 0.0;         // subsampling parameter, in (0, 1]
    double beta = 0.0;            // ln(1/epsilon) / k
    std::int64_t m = 0;           // plays per candidate action in each phase
    double rad = 0.0;             // confidence radius sqrt(ln(T) / m)
};

// epsilon* = (n k^2 / (4 T ln T))^(1/3). Not clamped; values >= 1 are possible
// for small T and are handled at the run boundary.
double compute_epsilon_star(int n, int k, std::int64_t t_horizon);

// Unrounded (k T / (2 n sqrt(ln T)))^(2/3); satisfies epsilon* = m_raw * n / T.
double compute_m_unrounded(int n, int k, std::int64_t t_horizon);

// m = ceil(m_raw), floored at 1.
std::int64_t compute_m(int n, int k, std::int64_t t_horizon);

// beta = ln(1/epsilon) / k, epsilon in (0, 1]. Zero when epsilon == 1.
double compute_beta(double epsilon, int k);

// s_i = ceil((n - i + 1) * min(1, beta)), floored at 1; never exceeds the
// n - i + 1 arms still available in phase i.
std::int64_t compute_sample_size(int n, int phase_index, double beta);

struct DerivedParams {
    BanditParams params;
    bool epsilon_clamped = false; // derived epsilon* was >= 1 and got clamped
};

// Builds the schedule for a run: m from the horizon, epsilon either overridden
// or epsilon*(n, k, T). A derived epsilon* >= 1 is clamped to 1 - 1e-9 and
// flagged; an override must already lie in (0, 1].
DerivedParams derive_params(int n, int k, std::int64_t t_horizon,
                            std::optional<double> epsilon_override = std::nullopt);

// m * sum_{i=1..k} s_i, the number of steps the schedule spends exploring.
std::int64_t exploration_length(const BanditParams& params);

struct HorizonReport {
    int n = 0;
    int k = 0;
    std::int64_t t_horizon = 0;
    double horizon_lhs = 0.0;            // n (k+1) sqrt(ln T)
    bool horizon_ok = false;             // horizon_lhs <= T
    std::int64_t exploration_steps = 0;  // exploration_length of the derived schedule
    bool budget_ok = false;              // exploration_steps <= T
    double epsilon_star = 0.0;           // raw value, possibly >= 1
    bool epsilon_clamped = false;
    std::int64_t m = 0;
    double beta = 0.0;
    std::int64_t s1 = 0;

    bool valid() const { return horizon_ok && budget_ok; }
};

// Checks both sufficiency conditions on (n, k, T): the horizon inequality
// T >= n (k+1) sqrt(ln T) and that the derived schedule's exploration fits
// inside T. Carries the computed sides so callers can print them.
HorizonReport validate_horizon(int n, int k, std::int64_t t_horizon);

// Smallest T >= 2 for which validate_horizon(n, k, T) is valid.
std::int64_t minimal_valid_horizon(int n, int k);

// Draws s distinct arms uniformly without replacement from `remaining`;
// result order is the sampling order. Deterministic given the rng state and
// the order of `remaining`.
std::vector<int> sample_candidate_set(const std::vector<int>& remaining, std::int64_t s, Rng& rng);

// Book-keeping for one exploration phase: the candidates drawn this phase and
// their running reward sums over exactly target_plays plays each.
struct PhaseState {
    int phase_index = 0;
    std::vector<int> committed_set;      // arms fixed in earlier phases, ascending
    std::vector<int> candidate_set;      // this phase's sample, in sampling order
    std::int64_t sample_size = 0;
    std::int64_t target_plays = 0;       // m
    std::vector<double> reward_sums;     // parallel to candidate_set
    std::vector<std::int64_t> play_counts;

    PhaseState() = default;
    PhaseState(int phase, std::vector<int> committed, std::vector<int> candidates,
               std::int64_t plays_per_candidate);
};

// Candidate with the highest empirical mean, ties broken by lowest arm id.
// Throws if any candidate has not been played exactly target_plays times.
int select_empirical_best(const PhaseState& state);

// Complete record of one online run.
struct RunTrace {
    std::vector<std::vector<int>> actions; // action per step, ids ascending
    std::vector<double> rewards;           // one reward per step, in [0, 1]
    std::vector<std::int64_t> phase_ends;  // step count T_i at which phase i completed
    std::vector<int> committed_arms;       // selection order
    BanditParams params;

    std::string method;                    // "sgb", "etcg", "sgb-anytime", "random"
    bool forced = false;                   // run executed despite a failed horizon check
    bool epsilon_clamped = false;
    std::vector<std::int64_t> window_ends; // restart boundaries (anytime runs only)

    std::int64_t step_count() const { return static_cast<std::int64_t>(rewards.size()); }
    // Last completed phase boundary; 0 if no phase finished.
    std::int64_t exploration_end() const { return phase_ends.empty() ? 0 : phase_ends.back(); }
};

} // namespace sgb
