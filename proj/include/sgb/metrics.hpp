#pragma once

#include <vector>

#include "sgb/bandit_core.hpp"

namespace sgb {

// Element t (1-based) is t * f_ref - sum of the first t rewards. f_ref must
// lie in [0, 1]; negative entries mean the learner beat the reference.
std::vector<double> cumulative_regret_series(const RunTrace& trace, double f_ref);

// Trailing mean over `window` values; the first window-1 entries average the
// available prefix. Output length equals input length.
std::vector<double> moving_average(const std::vector<double>& series, int window);

struct AggregateSeries {
    std::vector<double> mean;
    std::vector<double> std_dev; // sample std, n-1 denominator; 0 for one run
};

// Pointwise mean and sample standard deviation over equal-length series.
AggregateSeries aggregate_runs(const std::vector<std::vector<double>>& series);

struct Aggregate {
    double mean = 0.0;
    double std_dev = 0.0;
};

Aggregate aggregate_scalars(const std::vector<double>& values);

// Phase label per step: greedy phase index (1-based) while exploring, 0 once
// a window's final set is being exploited. Anytime traces restart labels at
// each window; "random" traces are all zeros.
std::vector<int> phase_per_step(const RunTrace& trace);

} // namespace sgb
