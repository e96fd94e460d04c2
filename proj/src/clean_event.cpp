#include "sgb/clean_event.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace sgb {

double estimate_clean_event_rate(Environment& env, const BanditParams& params,
                                 std::int64_t repetitions, Rng& rng) {
    if (!env.exact_oracle())
        throw std::invalid_argument("clean-event diagnostic needs an exact expected-value oracle");
    if (repetitions < 1) throw std::invalid_argument("repetitions must be at least 1");
    const int n = env.arm_count();
    if (params.n != n) throw std::invalid_argument("schedule arm count does not match environment");

    std::int64_t clean = 0;
    std::vector<int> action;
    for (std::int64_t rep = 0; rep < repetitions; ++rep) {
        std::vector<int> remaining(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) remaining[static_cast<std::size_t>(i)] = i;
        std::vector<int> committed;
        bool all_within = true;

        for (int i = 1; i <= params.k; ++i) {
            const std::int64_t s = compute_sample_size(n, i, params.beta);
            PhaseState state(i, committed, sample_candidate_set(remaining, s, rng), params.m);
            for (std::size_t c = 0; c < state.candidate_set.size(); ++c) {
                action = committed;
                action.insert(std::lower_bound(action.begin(), action.end(),
                                               state.candidate_set[c]),
                              state.candidate_set[c]);
                for (std::int64_t play = 0; play < params.m; ++play) {
                    state.reward_sums[c] += env.sample(action, rng);
                    ++state.play_counts[c];
                }
                const double mean = state.reward_sums[c] / static_cast<double>(params.m);
                const double expected = env.expected_value(action).mean;
                if (!(std::abs(mean - expected) < params.rad)) all_within = false;
            }
            const int best = select_empirical_best(state);
            committed.insert(std::lower_bound(committed.begin(), committed.end(), best), best);
            remaining.erase(std::find(remaining.begin(), remaining.end(), best));
        }
        if (all_within) ++clean;
    }
    return static_cast<double>(clean) / static_cast<double>(repetitions);
}

} // namespace sgb
