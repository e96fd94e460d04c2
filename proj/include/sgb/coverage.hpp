#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "sgb/environment.hpp"
#include "sgb/random.hpp"

namespace sgb {

// Probabilistic coverage: arm a covers universe element u with probability
// cover_prob[a][u] in each realization, independently across pairs. The
// expected covered fraction has a closed form and is monotone submodular.
struct CoverageInstance {
    int arm_count = 0;
    int universe_size = 0;
    std::vector<double> cover_prob; // arm-major, arm_count * universe_size

    double prob(int arm, int element) const {
        return cover_prob[static_cast<std::size_t>(arm) * static_cast<std::size_t>(universe_size) +
                          static_cast<std::size_t>(element)];
    }
};

// Seeded generator: each entry is 0 with probability `sparsity`, otherwise
// uniform in [0, p_max].
CoverageInstance make_random_coverage(int arm_count, int universe_size, double p_max,
                                      double sparsity, std::uint64_t seed);

// One stochastic realization: fraction of elements covered by at least one
// arm of `action`. Empty action gives 0.
double coverage_sample(const CoverageInstance& instance, std::span<const int> action, Rng& rng);

// Exact expectation (1/|U|) * sum_u (1 - prod_{a in action} (1 - p_{a,u})).
double coverage_expected(const CoverageInstance& instance, std::span<const int> action);

// Text round-trip: "arms N", "universe U", then one row of U probabilities per
// arm. Probabilities are written with enough digits to reload bit-exactly.
void save_coverage(const CoverageInstance& instance, std::ostream& out);
CoverageInstance load_coverage(std::istream& in);

class CoverageEnv final : public Environment {
public:
    explicit CoverageEnv(CoverageInstance instance) : instance_(std::move(instance)) {}

    int arm_count() const override { return instance_.arm_count; }
    double sample(std::span<const int> action, Rng& rng) override {
        return coverage_sample(instance_, action, rng);
    }
    ExpectedValue expected_value(std::span<const int> action) const override {
        return {coverage_expected(instance_, action), 0.0};
    }
    bool exact_oracle() const override { return true; }

    const CoverageInstance& instance() const { return instance_; }

private:
    CoverageInstance instance_;
};

} // namespace sgb
