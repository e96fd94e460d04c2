#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sgb {

using SetOracle = std::function<double(std::span<const int>)>;

struct SubmodularityReport {
    bool monotone = true;
    bool submodular = true;
    double tolerance = 0.0;
    // First violation found, if any. Sets are arm-id lists; for monotonicity
    // witness_a ⊆ witness_b with f(a) > f(b); for submodularity the marginal
    // of witness_x shrinks from witness_a to witness_b by more than tolerance.
    std::vector<int> witness_a;
    std::vector<int> witness_b;
    int witness_x = -1;
    double violation = 0.0;

    bool passed() const { return monotone && submodular; }
};

// Brute-force check over all subsets that f is monotone non-decreasing and has
// diminishing marginal gains: for all A ⊆ B and x ∉ B,
// f(A ∪ {x}) − f(A) ≥ f(B ∪ {x}) − f(B) − tolerance. Enumerates 2^n values and
// all submask pairs, so arm_count is capped at 16.
SubmodularityReport check_monotone_submodular(const SetOracle& oracle, int arm_count,
                                              double tolerance = 1e-9);

} // namespace sgb
