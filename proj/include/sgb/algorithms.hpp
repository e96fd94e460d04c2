#pragma once

#include <cstdint>
#include <optional>

#include "sgb/bandit_core.hpp"
#include "sgb/environment.hpp"
#include "sgb/random.hpp"

namespace sgb {

struct SgbOptions {
    // Run even when the horizon check fails; the trace records whether the
    // flag was actually needed.
    bool force = false;
    // Stop after this many steps (0 means the full horizon). Used for the
    // truncated final window of the anytime schedule.
    std::int64_t max_steps = 0;
};

// Explore-then-commit stochastic greedy. Derives m from (n, k, T) and epsilon
// from compute_epsilon_star unless overridden, then for each of k phases
// samples s_i candidates from the unpicked arms, plays each committed ∪ {a}
// exactly m times, commits the empirical argmax, and finally plays the full
// k-set for the remaining steps. Rejects configurations that fail either the
// horizon inequality or the exploration budget with the actual epsilon,
// unless options.force is set.
RunTrace run_sgb(Environment& env, int k, std::int64_t t_horizon,
                 std::optional<double> epsilon_override, Rng& rng, const SgbOptions& options = {});

// run_sgb with epsilon = e^(-k), which makes beta = 1 and every candidate set
// the full remaining pool. Trace method is "etcg".
RunTrace run_etcg(Environment& env, int k, std::int64_t t_horizon, Rng& rng,
                  const SgbOptions& options = {});

// Doubling schedule: fresh run_sgb over windows of length t_initial * 2^i
// until total_steps are consumed; the last window is truncated. phase_ends and
// window_ends are global step indices; committed_arms concatenate across
// windows; params reflect the final window's nominal schedule.
RunTrace run_sgb_anytime(Environment& env, int k, std::int64_t t_initial,
                         std::int64_t total_steps, Rng& rng);

// Picks a uniform random k-set once and plays it for every step.
RunTrace run_random_constant(Environment& env, int k, std::int64_t t_horizon, Rng& rng);

} // namespace sgb
