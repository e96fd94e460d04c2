#include "sgb/offline.hpp"

#include <algorithm>
#include <stdexcept>

#include "sgb/bandit_core.hpp"

namespace sgb {

namespace {

void check_shape(int arm_count, int k) {
    if (arm_count < 1) throw std::domain_error("arm count must be at least 1");
    if (k < 0 || k > arm_count) throw std::domain_error("cardinality must satisfy 0 <= k <= n");
}

// Sorted insert of `arm` into a copy of `base`.
std::vector<int> with_arm(const std::vector<int>& base, int arm) {
    std::vector<int> out;
    out.reserve(base.size() + 1);
    auto it = std::lower_bound(base.begin(), base.end(), arm);
    out.insert(out.end(), base.begin(), it);
    out.push_back(arm);
    out.insert(out.end(), it, base.end());
    return out;
}

// Greedy over explicit per-phase candidate pools.
OfflineResult greedy_over_pools(const SetOracle& oracle, int k,
                                const std::function<std::vector<int>(int, const std::vector<int>&)>&
                                    pool_for_phase,
                                std::vector<int> remaining) {
    OfflineResult result;
    for (int i = 1; i <= k; ++i) {
        const std::vector<int> pool = pool_for_phase(i, remaining);
        int best_arm = -1;
        double best_value = 0.0;
        std::vector<int> best_set;
        for (int a : pool) {
            std::vector<int> candidate = with_arm(result.selected, a);
            const double v = oracle(candidate);
            ++result.evaluations;
            if (best_arm == -1 || v > best_value || (v == best_value && a < best_arm)) {
                best_arm = a;
                best_value = v;
                best_set = std::move(candidate);
            }
        }
        result.selected = std::move(best_set);
        result.value = best_value;
        remaining.erase(std::find(remaining.begin(), remaining.end(), best_arm));
    }
    if (k == 0) result.value = oracle(result.selected);
    return result;
}

std::vector<int> all_arms(int arm_count) {
    std::vector<int> arms(static_cast<std::size_t>(arm_count));
    for (int i = 0; i < arm_count; ++i) arms[static_cast<std::size_t>(i)] = i;
    return arms;
}

} // namespace

OfflineResult offline_greedy(const SetOracle& oracle, int arm_count, int k) {
    check_shape(arm_count, k);
    return greedy_over_pools(
        oracle, k, [](int, const std::vector<int>& remaining) { return remaining; },
        all_arms(arm_count));
}

OfflineResult offline_stochastic_greedy(const SetOracle& oracle, int arm_count, int k,
                                        double epsilon, Rng& rng) {
    check_shape(arm_count, k);
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw std::domain_error("epsilon must lie in (0, 1)");
    if (k == 0) return offline_greedy(oracle, arm_count, 0);
    const double beta = compute_beta(epsilon, k);
    return greedy_over_pools(
        oracle, k,
        [&](int phase, const std::vector<int>& remaining) {
            const std::int64_t s = compute_sample_size(arm_count, phase, beta);
            return sample_candidate_set(remaining, s, rng);
        },
        all_arms(arm_count));
}

OfflineResult brute_force_opt(const SetOracle& oracle, int arm_count, int k) {
    check_shape(arm_count, k);

    double choose = 1.0;
    for (int j = 1; j <= k; ++j) {
        choose *= static_cast<double>(arm_count - j + 1) / static_cast<double>(j);
        if (choose > 1e6)
            throw std::domain_error("combinatorial budget exceeded: C(n, k) > 1e6");
    }

    OfflineResult result;
    bool have_best = false;
    std::vector<int> subset;
    for (int size = 0; size <= k; ++size) {
        subset.resize(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) subset[static_cast<std::size_t>(i)] = i;
        while (true) {
            const double v = oracle(subset);
            ++result.evaluations;
            if (!have_best || v > result.value ||
                (v == result.value &&
                 std::lexicographical_compare(subset.begin(), subset.end(),
                                              result.selected.begin(), result.selected.end()))) {
                have_best = true;
                result.value = v;
                result.selected = subset;
            }
            // Advance to the next combination of `size` ids from [0, arm_count).
            int pos = size - 1;
            while (pos >= 0 && subset[static_cast<std::size_t>(pos)] == arm_count - size + pos) --pos;
            if (pos < 0) break;
            int next = ++subset[static_cast<std::size_t>(pos)];
            for (int i = pos + 1; i < size; ++i) subset[static_cast<std::size_t>(i)] = ++next;
        }
    }
    return result;
}

} // namespace sgb
