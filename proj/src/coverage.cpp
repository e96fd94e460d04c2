#include "sgb/coverage.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sgb {

namespace {

void check_action(const CoverageInstance& instance, std::span<const int> action) {
    for (int a : action) {
        if (a < 0 || a >= instance.arm_count)
            throw std::invalid_argument("action references an unknown arm id");
    }
}

} // namespace

CoverageInstance make_random_coverage(int arm_count, int universe_size, double p_max,
                                      double sparsity, std::uint64_t seed) {
    if (arm_count < 1 || universe_size < 1)
        throw std::invalid_argument("coverage instance needs at least one arm and one element");
    if (p_max < 0.0 || p_max > 1.0) throw std::invalid_argument("p_max must lie in [0, 1]");
    if (sparsity < 0.0 || sparsity > 1.0) throw std::invalid_argument("sparsity must lie in [0, 1]");

    CoverageInstance instance;
    instance.arm_count = arm_count;
    instance.universe_size = universe_size;
    instance.cover_prob.resize(static_cast<std::size_t>(arm_count) *
                               static_cast<std::size_t>(universe_size));
    Rng rng(splitmix64(seed));
    for (double& p : instance.cover_prob) {
        if (bernoulli(rng, sparsity))
            p = 0.0;
        else
            p = next_unit(rng) * p_max;
    }
    return instance;
}

double coverage_sample(const CoverageInstance& instance, std::span<const int> action, Rng& rng) {
    check_action(instance, action);
    if (action.empty()) return 0.0;
    int covered = 0;
    for (int u = 0; u < instance.universe_size; ++u) {
        for (int a : action) {
            if (bernoulli(rng, instance.prob(a, u))) {
                ++covered;
                break;
            }
        }
    }
    return static_cast<double>(covered) / static_cast<double>(instance.universe_size);
}

double coverage_expected(const CoverageInstance& instance, std::span<const int> action) {
    check_action(instance, action);
    if (action.empty()) return 0.0;
    double total = 0.0;
    for (int u = 0; u < instance.universe_size; ++u) {
        double miss = 1.0;
        for (int a : action) miss *= 1.0 - instance.prob(a, u);
        total += 1.0 - miss;
    }
    return total / static_cast<double>(instance.universe_size);
}

void save_coverage(const CoverageInstance& instance, std::ostream& out) {
    out << "arms " << instance.arm_count << "\n";
    out << "universe " << instance.universe_size << "\n";
    char buf[64];
    for (int a = 0; a < instance.arm_count; ++a) {
        for (int u = 0; u < instance.universe_size; ++u) {
            std::snprintf(buf, sizeof(buf), "%.17g", instance.prob(a, u));
            out << (u == 0 ? "" : " ") << buf;
        }
        out << "\n";
    }
}

CoverageInstance load_coverage(std::istream& in) {
    std::string key;
    CoverageInstance instance;
    if (!(in >> key) || key != "arms" || !(in >> instance.arm_count))
        throw std::runtime_error("coverage file: expected 'arms N' header");
    if (!(in >> key) || key != "universe" || !(in >> instance.universe_size))
        throw std::runtime_error("coverage file: expected 'universe U' header");
    if (instance.arm_count < 1 || instance.universe_size < 1)
        throw std::runtime_error("coverage file: dimensions must be positive");
    const std::size_t total = static_cast<std::size_t>(instance.arm_count) *
                              static_cast<std::size_t>(instance.universe_size);
    instance.cover_prob.resize(total);
    for (std::size_t i = 0; i < total; ++i) {
        if (!(in >> instance.cover_prob[i]))
            throw std::runtime_error("coverage file: truncated probability matrix");
        if (instance.cover_prob[i] < 0.0 || instance.cover_prob[i] > 1.0)
            throw std::runtime_error("coverage file: probability outside [0, 1]");
    }
    return instance;
}

} // namespace sgb
