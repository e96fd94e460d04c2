#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>
#include <vector>

#include "sgb/algorithms.hpp"
#include "sgb/cascade.hpp"
#include "sgb/clean_event.hpp"
#include "sgb/coverage.hpp"
#include "sgb/graph.hpp"
#include "sgb/metrics.hpp"

using namespace sgb;

namespace {

RunTrace trace_with_rewards(std::vector<double> rewards) {
    RunTrace trace;
    trace.rewards = std::move(rewards);
    trace.actions.assign(trace.rewards.size(), {0});
    trace.method = "sgb";
    return trace;
}

} // namespace

TEST_CASE("cumulative regret series") {
    SUBCASE("rewards equal to the reference give zero regret") {
        const auto series = cumulative_regret_series(trace_with_rewards({0.5, 0.5, 0.5}), 0.5);
        for (double v : series) CHECK(v == doctest::Approx(0.0));
    }
    SUBCASE("zero rewards accumulate linearly") {
        const auto series = cumulative_regret_series(trace_with_rewards({0, 0, 0, 0}), 0.5);
        CHECK(series == std::vector<double>{0.5, 1.0, 1.5, 2.0});
    }
    SUBCASE("beating the reference goes negative") {
        const auto series = cumulative_regret_series(trace_with_rewards({1, 1, 1, 1}), 0.5);
        CHECK(series.back() == doctest::Approx(-2.0));
        CHECK(std::is_sorted(series.rbegin(), series.rend()));
    }
    SUBCASE("affine in the reference value") {
        const RunTrace trace = trace_with_rewards({0.2, 0.9, 0.4, 0.6, 0.1});
        const auto base = cumulative_regret_series(trace, 0.3);
        const auto shifted = cumulative_regret_series(trace, 0.5);
        for (std::size_t t = 0; t < base.size(); ++t)
            CHECK(shifted[t] == doctest::Approx(base[t] + 0.2 * static_cast<double>(t + 1)));
    }
    SUBCASE("reference outside the unit interval is rejected") {
        CHECK_THROWS_AS(cumulative_regret_series(trace_with_rewards({0.1}), 1.5),
                        std::domain_error);
    }
}

TEST_CASE("moving average") {
    CHECK(moving_average({3, 1, 4}, 1) == std::vector<double>{3, 1, 4});
    CHECK(moving_average({2, 2, 2, 2}, 3) == std::vector<double>{2, 2, 2, 2});
    const auto alt = moving_average({0, 1, 0, 1, 0, 1}, 2);
    CHECK(alt[0] == doctest::Approx(0.0));
    for (std::size_t t = 1; t < alt.size(); ++t) CHECK(alt[t] == doctest::Approx(0.5));

    SUBCASE("bounded by the input range") {
        Rng rng(12);
        std::vector<double> series;
        for (int i = 0; i < 300; ++i) series.push_back(next_unit(rng) * 7.0 - 3.0);
        const double lo = *std::min_element(series.begin(), series.end());
        const double hi = *std::max_element(series.begin(), series.end());
        for (int window : {1, 5, 100, 500}) {
            for (double v : moving_average(series, window)) {
                CHECK(v >= lo - 1e-12);
                CHECK(v <= hi + 1e-12);
            }
        }
    }
    CHECK_THROWS_AS(moving_average({1.0}, 0), std::domain_error);
}

TEST_CASE("aggregation across runs") {
    SUBCASE("single run has zero spread") {
        const AggregateSeries agg = aggregate_runs({{1, 2, 3}});
        CHECK(agg.mean == std::vector<double>{1, 2, 3});
        CHECK(agg.std_dev == std::vector<double>{0, 0, 0});
    }
    SUBCASE("identical runs have zero spread") {
        const AggregateSeries agg = aggregate_runs({{1, 2}, {1, 2}});
        CHECK(agg.std_dev == std::vector<double>{0, 0});
    }
    SUBCASE("known two-run spread") {
        const AggregateSeries agg = aggregate_runs({{0, 0}, {2, 2}});
        CHECK(agg.mean == std::vector<double>{1, 1});
        CHECK(agg.std_dev[0] == doctest::Approx(std::sqrt(2.0)));
    }
    SUBCASE("length mismatch is rejected") {
        CHECK_THROWS_AS(aggregate_runs({{1, 2}, {1}}), std::invalid_argument);
    }
    SUBCASE("scalar form") {
        const Aggregate agg = aggregate_scalars({0.0, 2.0});
        CHECK(agg.mean == doctest::Approx(1.0));
        CHECK(agg.std_dev == doctest::Approx(std::sqrt(2.0)));
        CHECK(aggregate_scalars({5.0}).std_dev == 0.0);
    }
}

TEST_CASE("clean event rate") {
    SUBCASE("deterministic rewards are always clean") {
        CoverageInstance inst;
        inst.arm_count = 4;
        inst.universe_size = 2;
        inst.cover_prob = {1, 1, 1, 0, 0, 1, 0, 0};
        CoverageEnv env(std::move(inst));
        const DerivedParams d = derive_params(4, 2, 200);
        Rng rng(5);
        CHECK(estimate_clean_event_rate(env, d.params, 50, rng) == 1.0);
    }
    SUBCASE("an inflated radius is always clean") {
        CoverageEnv env(make_random_coverage(8, 10, 0.8, 0.3, 31));
        DerivedParams d = derive_params(8, 3, 500);
        d.params.rad = 10.0;
        Rng rng(6);
        CHECK(estimate_clean_event_rate(env, d.params, 100, rng) == 1.0);
    }
    SUBCASE("frequency respects the concentration bound at small scale") {
        CoverageEnv env(make_random_coverage(10, 20, 0.8, 0.3, 32));
        const DerivedParams d = derive_params(10, 3, 1000);
        Rng rng(7);
        const std::int64_t reps = 200;
        const double rate = estimate_clean_event_rate(env, d.params, reps, rng);
        const double sigma =
            std::sqrt(std::max(rate * (1.0 - rate), 1e-6) / static_cast<double>(reps));
        CHECK(rate >= 1.0 - 2.0 / 1000.0 - 3.0 * sigma);
    }
    SUBCASE("needs an exact oracle") {
        std::istringstream in("0 1\n1 2\n");
        Graph g = load_edge_list(in).graph;
        InfluenceEnv env(std::make_shared<const Graph>(std::move(g)), 0.1, 10, 1);
        const DerivedParams d = derive_params(3, 2, 200);
        Rng rng(8);
        CHECK_THROWS_AS(estimate_clean_event_rate(env, d.params, 10, rng), std::invalid_argument);
    }
    SUBCASE("deterministic per seed") {
        CoverageEnv env(make_random_coverage(8, 10, 0.8, 0.3, 33));
        const DerivedParams d = derive_params(8, 3, 500);
        Rng r1(9), r2(9);
        CHECK(estimate_clean_event_rate(env, d.params, 60, r1) ==
              estimate_clean_event_rate(env, d.params, 60, r2));
    }
}

TEST_CASE("phase labels per step") {
    SUBCASE("explore then exploit") {
        CoverageEnv env(make_random_coverage(10, 12, 0.8, 0.3, 41));
        Rng rng(10);
        const RunTrace trace = run_sgb(env, 3, 2000, std::nullopt, rng);
        const std::vector<int> phases = phase_per_step(trace);
        REQUIRE(static_cast<std::int64_t>(phases.size()) == trace.step_count());
        CHECK(phases.front() == 1);
        CHECK(phases[static_cast<std::size_t>(trace.phase_ends[0]) - 1] == 1);
        CHECK(phases[static_cast<std::size_t>(trace.phase_ends[0])] == 2);
        CHECK(phases[static_cast<std::size_t>(trace.exploration_end())] == 0);
        CHECK(phases.back() == 0);
    }
    SUBCASE("random runs have no phases") {
        CoverageEnv env(make_random_coverage(10, 12, 0.8, 0.3, 41));
        Rng rng(11);
        const RunTrace trace = run_random_constant(env, 3, 50, rng);
        for (int p : phase_per_step(trace)) CHECK(p == 0);
    }
    SUBCASE("a truncated run ends inside a phase") {
        CoverageEnv env(make_random_coverage(10, 12, 0.8, 0.3, 41));
        Rng rng(12);
        SgbOptions options;
        options.max_steps = 30;
        const RunTrace trace = run_sgb(env, 3, 2000, std::nullopt, rng, options);
        REQUIRE(trace.step_count() == 30);
        const std::vector<int> phases = phase_per_step(trace);
        CHECK(phases.back() == static_cast<int>(trace.phase_ends.size()) + 1);
        CHECK(phases.back() == 1);
    }
    SUBCASE("anytime labels restart at each window") {
        CoverageEnv env(make_random_coverage(10, 12, 0.8, 0.3, 41));
        Rng rng(13);
        const std::int64_t t0 = minimal_valid_horizon(10, 3);
        const RunTrace trace = run_sgb_anytime(env, 3, t0, 3 * t0, rng);
        const std::vector<int> phases = phase_per_step(trace);
        CHECK(phases[static_cast<std::size_t>(t0)] == 1);
        CHECK(phases[static_cast<std::size_t>(t0) - 1] == 0);
    }
}
