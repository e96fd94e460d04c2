#include "sgb/cascade.hpp"

#include <cmath>
#include <stdexcept>

namespace sgb {

int simulate_cascade(const Graph& graph, std::span<const int> seeds, double p, Rng& rng,
                     CascadeScratch& scratch) {
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("infection probability must lie in [0, 1]");
    for (int s : seeds) {
        if (s < 0 || s >= graph.node_count)
            throw std::invalid_argument("seed id out of range");
    }

    scratch.activated_epoch.resize(static_cast<std::size_t>(graph.node_count), 0);
    ++scratch.epoch;
    const std::uint64_t epoch = scratch.epoch;
    auto active = [&](int v) {
        return scratch.activated_epoch[static_cast<std::size_t>(v)] == epoch;
    };

    scratch.frontier.clear();
    int activated = 0;
    for (int s : seeds) {
        if (!active(s)) {
            scratch.activated_epoch[static_cast<std::size_t>(s)] = epoch;
            scratch.frontier.push_back(s);
            ++activated;
        }
    }

    while (!scratch.frontier.empty()) {
        scratch.next_frontier.clear();
        for (int u : scratch.frontier) {
            for (int v : graph.row(u)) {
                if (active(v)) continue;
                if (bernoulli(rng, p)) {
                    scratch.activated_epoch[static_cast<std::size_t>(v)] = epoch;
                    scratch.next_frontier.push_back(v);
                    ++activated;
                }
            }
        }
        std::swap(scratch.frontier, scratch.next_frontier);
    }
    return activated;
}

int simulate_cascade(const Graph& graph, std::span<const int> seeds, double p, Rng& rng) {
    CascadeScratch scratch;
    return simulate_cascade(graph, seeds, p, rng, scratch);
}

double influence_reward(const Graph& graph, std::span<const int> seeds, double p, Rng& rng,
                        CascadeScratch& scratch) {
    return static_cast<double>(simulate_cascade(graph, seeds, p, rng, scratch)) /
           static_cast<double>(graph.node_count);
}

double influence_reward(const Graph& graph, std::span<const int> seeds, double p, Rng& rng) {
    CascadeScratch scratch;
    return influence_reward(graph, seeds, p, rng, scratch);
}

SpreadEstimate estimate_expected_spread(const Graph& graph, std::span<const int> seeds, double p,
                                        std::int64_t reps, Rng& rng) {
    if (reps < 1) throw std::invalid_argument("spread estimation needs at least one rep");
    const std::uint64_t base = rng();
    CascadeScratch scratch;
    double mean = 0.0;
    double m2 = 0.0;
    for (std::int64_t r = 0; r < reps; ++r) {
        Rng rep_rng(splitmix64(base ^ static_cast<std::uint64_t>(r + 1)));
        const double x = influence_reward(graph, seeds, p, rep_rng, scratch);
        const double delta = x - mean;
        mean += delta / static_cast<double>(r + 1);
        m2 += delta * (x - mean);
    }
    SpreadEstimate est;
    est.mean = mean;
    est.reps = reps;
    if (reps > 1) {
        const double variance = m2 / static_cast<double>(reps - 1);
        est.std_error = std::sqrt(variance / static_cast<double>(reps));
    }
    return est;
}

InfluenceEnv::InfluenceEnv(std::shared_ptr<const Graph> graph, double p, std::int64_t oracle_reps,
                           std::uint64_t oracle_seed)
    : graph_(std::move(graph)), p_(p), oracle_reps_(oracle_reps), oracle_seed_(oracle_seed) {
    if (!graph_) throw std::invalid_argument("influence environment needs a graph");
    if (p_ < 0.0 || p_ > 1.0) throw std::invalid_argument("infection probability must lie in [0, 1]");
    if (oracle_reps_ < 1) throw std::invalid_argument("oracle reps must be at least 1");
}

double InfluenceEnv::sample(std::span<const int> action, Rng& rng) {
    return influence_reward(*graph_, action, p_, rng, scratch_);
}

ExpectedValue InfluenceEnv::expected_value(std::span<const int> action) const {
    Rng rng(derive_action_seed(oracle_seed_, action));
    const SpreadEstimate est = estimate_expected_spread(*graph_, action, p_, oracle_reps_, rng);
    return {est.mean, est.std_error};
}

} // namespace sgb
