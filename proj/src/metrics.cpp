#include "sgb/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace sgb {

std::vector<double> cumulative_regret_series(const RunTrace& trace, double f_ref) {
    if (f_ref < 0.0 || f_ref > 1.0) throw std::domain_error("reference value must lie in [0, 1]");
    std::vector<double> out;
    out.reserve(trace.rewards.size());
    double cum = 0.0;
    for (std::size_t t = 0; t < trace.rewards.size(); ++t) {
        cum += trace.rewards[t];
        out.push_back(static_cast<double>(t + 1) * f_ref - cum);
    }
    return out;
}

std::vector<double> moving_average(const std::vector<double>& series, int window) {
    if (window < 1) throw std::domain_error("window must be at least 1");
    std::vector<double> out;
    out.reserve(series.size());
    double sum = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        sum += series[t];
        if (t >= static_cast<std::size_t>(window)) sum -= series[t - static_cast<std::size_t>(window)];
        const std::size_t count = std::min<std::size_t>(t + 1, static_cast<std::size_t>(window));
        out.push_back(sum / static_cast<double>(count));
    }
    return out;
}

AggregateSeries aggregate_runs(const std::vector<std::vector<double>>& series) {
    if (series.empty()) throw std::invalid_argument("aggregate needs at least one run");
    const std::size_t len = series.front().size();
    for (const auto& s : series) {
        if (s.size() != len)
            throw std::invalid_argument("aggregate runs must share one series length");
    }
    AggregateSeries agg;
    agg.mean.assign(len, 0.0);
    agg.std_dev.assign(len, 0.0);
    const double count = static_cast<double>(series.size());
    for (std::size_t t = 0; t < len; ++t) {
        double mean = 0.0;
        for (const auto& s : series) mean += s[t];
        mean /= count;
        agg.mean[t] = mean;
        if (series.size() > 1) {
            double ss = 0.0;
            for (const auto& s : series) {
                const double d = s[t] - mean;
                ss += d * d;
            }
            agg.std_dev[t] = std::sqrt(ss / (count - 1.0));
        }
    }
    return agg;
}

Aggregate aggregate_scalars(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("aggregate needs at least one value");
    Aggregate agg;
    for (double v : values) agg.mean += v;
    agg.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            const double d = v - agg.mean;
            ss += d * d;
        }
        agg.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return agg;
}

std::vector<int> phase_per_step(const RunTrace& trace) {
    std::vector<int> out(static_cast<std::size_t>(trace.step_count()), 0);
    if (trace.method == "random") return out;

    std::vector<std::int64_t> windows = trace.window_ends;
    if (windows.empty()) windows.push_back(trace.step_count());

    std::size_t next_phase = 0;
    std::int64_t window_start = 0;
    for (std::int64_t window_end : windows) {
        int phases_done = 0;
        std::int64_t block_start = window_start;
        while (next_phase < trace.phase_ends.size() && trace.phase_ends[next_phase] <= window_end) {
            const std::int64_t block_end = trace.phase_ends[next_phase];
            ++phases_done;
            for (std::int64_t t = block_start; t < block_end; ++t)
                out[static_cast<std::size_t>(t)] = phases_done;
            block_start = block_end;
            ++next_phase;
        }
        // Tail steps: exploitation when all k phases completed, otherwise a
        // truncated phase still in progress.
        const int tail_phase = phases_done == trace.params.k ? 0 : phases_done + 1;
        for (std::int64_t t = block_start; t < window_end; ++t)
            out[static_cast<std::size_t>(t)] = tail_phase;
        window_start = window_end;
    }
    return out;
}

} // namespace sgb
