#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "sgb/environment.hpp"
#include "sgb/graph.hpp"
#include "sgb/random.hpp"

namespace sgb {

// Reusable buffers for simulate_cascade. Activation marks are epoch-stamped so
// clearing between cascades costs nothing.
struct CascadeScratch {
    std::vector<std::uint64_t> activated_epoch;
    std::vector<int> frontier;
    std::vector<int> next_frontier;
    std::uint64_t epoch = 0;
};

// Independent cascade: seeds start active; each newly activated node makes one
// Bernoulli(p) attempt per neighbor that is inactive at attempt time; repeats
// until no new activations. Returns the total number of active nodes.
int simulate_cascade(const Graph& graph, std::span<const int> seeds, double p, Rng& rng,
                     CascadeScratch& scratch);
int simulate_cascade(const Graph& graph, std::span<const int> seeds, double p, Rng& rng);

// Activated count divided by node_count, so rewards live in [0, 1].
double influence_reward(const Graph& graph, std::span<const int> seeds, double p, Rng& rng,
                        CascadeScratch& scratch);
double influence_reward(const Graph& graph, std::span<const int> seeds, double p, Rng& rng);

struct SpreadEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t reps = 0;
};

// Monte Carlo mean and standard error of influence_reward over `reps`
// cascades. Each rep runs on its own stream derived from one base draw of
// `rng`, so estimates are reproducible per seed and parallelizable per rep.
SpreadEstimate estimate_expected_spread(const Graph& graph, std::span<const int> seeds, double p,
                                        std::int64_t reps, Rng& rng);

// Influence maximization environment. expected_value runs a fixed number of
// cascade reps on a stream derived from (oracle_seed, action), so it is a
// deterministic function of the action. Holds mutable scratch: use one
// instance per thread.
class InfluenceEnv final : public Environment {
public:
    InfluenceEnv(std::shared_ptr<const Graph> graph, double p, std::int64_t oracle_reps,
                 std::uint64_t oracle_seed);

    int arm_count() const override { return graph_->node_count; }
    double sample(std::span<const int> action, Rng& rng) override;
    ExpectedValue expected_value(std::span<const int> action) const override;
    bool exact_oracle() const override { return false; }

    const Graph& graph() const { return *graph_; }
    double infection_prob() const { return p_; }
    std::int64_t oracle_reps() const { return oracle_reps_; }

private:
    std::shared_ptr<const Graph> graph_;
    double p_;
    std::int64_t oracle_reps_;
    std::uint64_t oracle_seed_;
    mutable CascadeScratch scratch_;
};

} // namespace sgb
