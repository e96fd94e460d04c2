#include "sgb/bandit_core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sgb {

namespace {

void check_problem_shape(int n, int k) {
    if (n < 1) throw std::domain_error("arm count must be at least 1");
    if (k < 1 || k > n) throw std::domain_error("cardinality must satisfy 1 <= k <= n");
}

void check_horizon(std::int64_t t_horizon) {
    if (t_horizon < 2) throw std::domain_error("horizon must be at least 2");
}

} // namespace

double compute_epsilon_star(int n, int k, std::int64_t t_horizon) {
    check_problem_shape(n, k);
    check_horizon(t_horizon);
    const double t = static_cast<double>(t_horizon);
    const double num = static_cast<double>(n) * static_cast<double>(k) * static_cast<double>(k);
    return std::cbrt(num / (4.0 * t * std::log(t)));
}

double compute_m_unrounded(int n, int k, std::int64_t t_horizon) {
    check_problem_shape(n, k);
    check_horizon(t_horizon);
    const double t = static_cast<double>(t_horizon);
    const double base = static_cast<double>(k) * t /
                        (2.0 * static_cast<double>(n) * std::sqrt(std::log(t)));
    return std::pow(base, 2.0 / 3.0);
}

std::int64_t compute_m(int n, int k, std::int64_t t_horizon) {
    const double raw = compute_m_unrounded(n, k, t_horizon);
    const double rounded = std::ceil(raw);
    return std::max<std::int64_t>(1, static_cast<std::int64_t>(rounded));
}

double compute_beta(double epsilon, int k) {
    if (!(epsilon > 0.0) || epsilon > 1.0)
        throw std::domain_error("epsilon must lie in (0, 1]");
    if (k < 1) throw std::domain_error("cardinality must be at least 1");
    return std::log(1.0 / epsilon) / static_cast<double>(k);
}

std::int64_t compute_sample_size(int n, int phase_index, double beta) {
    if (phase_index < 1 || phase_index > n)
        throw std::domain_error("phase index must lie in [1, n]");
    if (!(beta >= 0.0)) throw std::domain_error("beta must be nonnegative");
    const double avail = static_cast<double>(n - phase_index + 1);
    const double raw = avail * std::min(1.0, beta);
    const std::int64_t s = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw)));
    return std::min<std::int64_t>(s, static_cast<std::int64_t>(avail));
}

DerivedParams derive_params(int n, int k, std::int64_t t_horizon,
                            std::optional<double> epsilon_override) {
    check_problem_shape(n, k);
    check_horizon(t_horizon);

    DerivedParams out;
    double epsilon;
    if (epsilon_override.has_value()) {
        epsilon = *epsilon_override;
        if (!(epsilon > 0.0) || epsilon > 1.0)
            throw std::domain_error("epsilon override must lie in (0, 1]");
    } else {
        epsilon = compute_epsilon_star(n, k, t_horizon);
        if (epsilon >= 1.0) {
            epsilon = 1.0 - 1e-9;
            out.epsilon_clamped = true;
        }
    }

    BanditParams& p = out.params;
    p.n = n;
    p.k = k;
    p.t_horizon = t_horizon;
    p.epsilon = epsilon;
    p.beta = compute_beta(epsilon, k);
    p.m = compute_m(n, k, t_horizon);
    p.rad = std::sqrt(std::log(static_cast<double>(t_horizon)) / static_cast<double>(p.m));
    return out;
}

std::int64_t exploration_length(const BanditParams& params) {
    std::int64_t total = 0;
    for (int i = 1; i <= params.k; ++i)
        total += compute_sample_size(params.n, i, params.beta);
    return total * params.m;
}

HorizonReport validate_horizon(int n, int k, std::int64_t t_horizon) {
    check_problem_shape(n, k);
    check_horizon(t_horizon);

    HorizonReport report;
    report.n = n;
    report.k = k;
    report.t_horizon = t_horizon;

    const double t = static_cast<double>(t_horizon);
    report.horizon_lhs =
        static_cast<double>(n) * static_cast<double>(k + 1) * std::sqrt(std::log(t));
    report.horizon_ok = report.horizon_lhs <= t;

    report.epsilon_star = compute_epsilon_star(n, k, t_horizon);
    const DerivedParams derived = derive_params(n, k, t_horizon);
    report.epsilon_clamped = derived.epsilon_clamped;
    report.m = derived.params.m;
    report.beta = derived.params.beta;
    report.s1 = compute_sample_size(n, 1, derived.params.beta);
    report.exploration_steps = exploration_length(derived.params);
    report.budget_ok = report.exploration_steps <= t_horizon;
    return report;
}

std::int64_t minimal_valid_horizon(int n, int k) {
    check_problem_shape(n, k);
    std::int64_t hi = 2;
    while (!validate_horizon(n, k, hi).valid()) {
        if (hi > (std::int64_t{1} << 60))
            throw std::runtime_error("no valid horizon below 2^60");
        hi *= 2;
    }
    std::int64_t lo = std::max<std::int64_t>(2, hi / 2);
    while (lo < hi) {
        const std::int64_t mid = lo + (hi - lo) / 2;
        if (validate_horizon(n, k, mid).valid())
            hi = mid;
        else
            lo = mid + 1;
    }
    return hi;
}

std::vector<int> sample_candidate_set(const std::vector<int>& remaining, std::int64_t s, Rng& rng) {
    const std::int64_t n = static_cast<std::int64_t>(remaining.size());
    if (s < 0 || s > n)
        throw std::invalid_argument("sample size exceeds the remaining arm pool");
    std::vector<int> pool = remaining;
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(s));
    for (std::int64_t i = 0; i < s; ++i) {
        const std::uint64_t j = uniform_index(rng, static_cast<std::uint64_t>(n - i));
        const std::size_t idx = static_cast<std::size_t>(i) + static_cast<std::size_t>(j);
        std::swap(pool[static_cast<std::size_t>(i)], pool[idx]);
        out.push_back(pool[static_cast<std::size_t>(i)]);
    }
    return out;
}

PhaseState::PhaseState(int phase, std::vector<int> committed, std::vector<int> candidates,
                       std::int64_t plays_per_candidate)
    : phase_index(phase),
      committed_set(std::move(committed)),
      candidate_set(std::move(candidates)),
      sample_size(static_cast<std::int64_t>(candidate_set.size())),
      target_plays(plays_per_candidate),
      reward_sums(candidate_set.size(), 0.0),
      play_counts(candidate_set.size(), 0) {}

int select_empirical_best(const PhaseState& state) {
    if (state.candidate_set.empty())
        throw std::invalid_argument("cannot select from an empty candidate set");
    for (std::int64_t c : state.play_counts) {
        if (c != state.target_plays)
            throw std::invalid_argument("phase is incomplete: a candidate is missing plays");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < state.candidate_set.size(); ++i) {
        const double mean_i = state.reward_sums[i] / static_cast<double>(state.target_plays);
        const double mean_b = state.reward_sums[best] / static_cast<double>(state.target_plays);
        if (mean_i > mean_b ||
            (mean_i == mean_b && state.candidate_set[i] < state.candidate_set[best]))
            best = i;
    }
    return state.candidate_set[best];
}

} // namespace sgb
