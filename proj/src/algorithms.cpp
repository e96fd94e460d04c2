#include "sgb/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace sgb {

namespace {

std::vector<int> with_arm(const std::vector<int>& base, int arm) {
    std::vector<int> out;
    out.reserve(base.size() + 1);
    auto it = std::lower_bound(base.begin(), base.end(), arm);
    out.insert(out.end(), base.begin(), it);
    out.push_back(arm);
    out.insert(out.end(), it, base.end());
    return out;
}

} // namespace

RunTrace run_sgb(Environment& env, int k, std::int64_t t_horizon,
                 std::optional<double> epsilon_override, Rng& rng, const SgbOptions& options) {
    const int n = env.arm_count();
    const DerivedParams derived = derive_params(n, k, t_horizon, epsilon_override);
    const BanditParams& params = derived.params;

    const HorizonReport report = validate_horizon(n, k, t_horizon);
    const bool schedule_ok = report.horizon_ok && exploration_length(params) <= t_horizon;
    if (!schedule_ok && !options.force)
        throw std::domain_error(
            "horizon check failed for n=" + std::to_string(n) + " k=" + std::to_string(k) +
            " T=" + std::to_string(t_horizon) + " (pass force to run anyway)");

    RunTrace trace;
    trace.params = params;
    trace.method = "sgb";
    trace.forced = !schedule_ok;
    trace.epsilon_clamped = derived.epsilon_clamped;

    const std::int64_t max_steps =
        options.max_steps > 0 ? std::min(options.max_steps, t_horizon) : t_horizon;
    trace.actions.reserve(static_cast<std::size_t>(max_steps));
    trace.rewards.reserve(static_cast<std::size_t>(max_steps));

    std::vector<int> remaining(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) remaining[static_cast<std::size_t>(i)] = i;

    std::int64_t step = 0;
    std::vector<int> committed;
    for (int i = 1; i <= k && step < max_steps; ++i) {
        const std::int64_t s = compute_sample_size(n, i, params.beta);
        PhaseState state(i, committed, sample_candidate_set(remaining, s, rng), params.m);

        bool complete = true;
        for (std::size_t c = 0; c < state.candidate_set.size() && complete; ++c) {
            const std::vector<int> action = with_arm(committed, state.candidate_set[c]);
            for (std::int64_t play = 0; play < params.m; ++play) {
                if (step == max_steps) {
                    complete = false;
                    break;
                }
                const double reward = env.sample(action, rng);
                trace.actions.push_back(action);
                trace.rewards.push_back(reward);
                state.reward_sums[c] += reward;
                ++state.play_counts[c];
                ++step;
            }
        }
        if (!complete) break;

        const int best = select_empirical_best(state);
        committed = with_arm(committed, best);
        remaining.erase(std::find(remaining.begin(), remaining.end(), best));
        trace.phase_ends.push_back(step);
        trace.committed_arms.push_back(best);
    }

    while (step < max_steps) {
        trace.actions.push_back(committed);
        trace.rewards.push_back(env.sample(committed, rng));
        ++step;
    }
    return trace;
}

RunTrace run_etcg(Environment& env, int k, std::int64_t t_horizon, Rng& rng,
                  const SgbOptions& options) {
    RunTrace trace = run_sgb(env, k, t_horizon, std::exp(-static_cast<double>(k)), rng, options);
    trace.method = "etcg";
    return trace;
}

RunTrace run_sgb_anytime(Environment& env, int k, std::int64_t t_initial,
                         std::int64_t total_steps, Rng& rng) {
    const int n = env.arm_count();
    const std::int64_t floor_horizon = minimal_valid_horizon(n, k);
    if (t_initial < floor_horizon)
        throw std::domain_error("initial window " + std::to_string(t_initial) +
                                " is below the minimal valid horizon " +
                                std::to_string(floor_horizon) + " for n=" + std::to_string(n) +
                                " k=" + std::to_string(k));
    if (total_steps < 1) throw std::domain_error("total steps must be at least 1");

    RunTrace combined;
    combined.method = "sgb-anytime";

    std::int64_t consumed = 0;
    std::int64_t window = t_initial;
    while (consumed < total_steps) {
        SgbOptions options;
        options.max_steps = std::min(window, total_steps - consumed);
        RunTrace piece = run_sgb(env, k, window, std::nullopt, rng, options);

        for (std::size_t i = 0; i < piece.actions.size(); ++i) {
            combined.actions.push_back(std::move(piece.actions[i]));
            combined.rewards.push_back(piece.rewards[i]);
        }
        for (std::int64_t t : piece.phase_ends) combined.phase_ends.push_back(consumed + t);
        for (int a : piece.committed_arms) combined.committed_arms.push_back(a);
        combined.epsilon_clamped = combined.epsilon_clamped || piece.epsilon_clamped;
        combined.params = piece.params;

        consumed += piece.step_count();
        combined.window_ends.push_back(consumed);
        window *= 2;
    }
    return combined;
}

RunTrace run_random_constant(Environment& env, int k, std::int64_t t_horizon, Rng& rng) {
    const int n = env.arm_count();
    if (k < 1 || k > n) throw std::domain_error("cardinality must satisfy 1 <= k <= n");
    if (t_horizon < 1) throw std::domain_error("horizon must be at least 1");

    std::vector<int> arms(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) arms[static_cast<std::size_t>(i)] = i;
    std::vector<int> picked = sample_candidate_set(arms, k, rng);

    RunTrace trace;
    trace.method = "random";
    trace.params.n = n;
    trace.params.k = k;
    trace.params.t_horizon = t_horizon;
    trace.committed_arms = picked;

    std::sort(picked.begin(), picked.end());
    trace.actions.reserve(static_cast<std::size_t>(t_horizon));
    trace.rewards.reserve(static_cast<std::size_t>(t_horizon));
    for (std::int64_t t = 0; t < t_horizon; ++t) {
        trace.actions.push_back(picked);
        trace.rewards.push_back(env.sample(picked, rng));
    }
    return trace;
}

} // namespace sgb
