#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "sgb/algorithms.hpp"
#include "sgb/cascade.hpp"
#include "sgb/coverage.hpp"
#include "sgb/experiment.hpp"
#include "sgb/graph.hpp"

using namespace sgb;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
    const fs::path dir = fs::temp_directory_path() / ("sgb_exp_" + tag);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Arm 0 covers elements {0, 1}, arms 1 and 2 cover one element each, arm 3
// covers nothing; every probability is 0 or 1 so expectations are exact.
CoverageEnv block_coverage_env() {
    CoverageInstance inst;
    inst.arm_count = 4;
    inst.universe_size = 4;
    inst.cover_prob = {1, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0};
    return CoverageEnv(std::move(inst));
}

std::string write_coverage_file(const fs::path& dir) {
    const fs::path path = dir / "env.txt";
    std::ofstream out(path, std::ios::binary);
    save_coverage(make_random_coverage(12, 15, 0.8, 0.3, 7), out);
    return path.string();
}

std::string config_json(const std::string& env_path, const std::string& output_dir,
                        const std::string& extra = "") {
    std::ostringstream out;
    out << "{\n"
        << "  \"env\": {\"type\": \"coverage\", \"path\": \"" << env_path << "\"},\n"
        << "  \"methods\": [{\"name\": \"sgb\"}],\n"
        << "  \"k\": [3],\n"
        << "  \"horizons\": [1000],\n"
        << "  \"repetitions\": 3,\n"
        << "  \"master_seed\": 99,\n"
        << "  \"output_dir\": \"" << output_dir << "\"" << (extra.empty() ? "" : ",") << "\n"
        << extra << "}\n";
    return out.str();
}

} // namespace

TEST_CASE("reference values") {
    const CoverageEnv env = block_coverage_env();
    SUBCASE("greedy reference is the greedy set's exact value") {
        const ReferenceValue ref = compute_reference_value(env, 2, ReferenceMethod::greedy);
        CHECK(ref.value == doctest::Approx(0.75));
        CHECK(ref.selected == std::vector<int>{0, 1});
        CHECK(ref.std_error == 0.0);
    }
    SUBCASE("brute reference scales the optimum") {
        const ReferenceValue ref = compute_reference_value(env, 2, ReferenceMethod::brute);
        CHECK(ref.value == doctest::Approx((1.0 - 1.0 / std::exp(1.0)) * 0.75));
        CHECK(ref.selected == std::vector<int>{0, 1});
    }
    SUBCASE("an empty selection is allowed") {
        const ReferenceValue ref = compute_reference_value(env, 0, ReferenceMethod::greedy);
        CHECK(ref.value == 0.0);
        CHECK(ref.selected.empty());
    }
    SUBCASE("degenerate cascades give an exact reference") {
        std::istringstream in("0 1\n1 2\n2 3\n3 4\n");
        InfluenceEnv ienv(std::make_shared<const Graph>(load_edge_list(in).graph), 0.0, 50, 7);
        const ReferenceValue ref = compute_reference_value(ienv, 2, ReferenceMethod::greedy);
        CHECK(ref.value == doctest::Approx(0.4));
        CHECK(ref.std_error == 0.0);
        CHECK(ref.selected == std::vector<int>{0, 1});
    }
}

TEST_CASE("run summaries") {
    RunTrace trace;
    trace.method = "sgb";
    trace.params.epsilon = 0.3;
    trace.params.k = 2;
    trace.params.t_horizon = 4;
    trace.rewards = {0.0, 0.5, 1.0, 0.25};
    trace.actions.assign(4, {0});
    trace.phase_ends = {1, 2};

    ReferenceValue ref;
    ref.value = 0.5;
    ref.std_error = 0.01;

    const RunSummary s = summarize_run(trace, ref, 42, 3, 1.5);
    CHECK(s.method == "sgb");
    CHECK(s.epsilon == 0.3);
    CHECK(s.k == 2);
    CHECK(s.horizon == 4);
    CHECK(s.rep == 3);
    CHECK(s.seed == 42);
    CHECK(s.cum_reward == doctest::Approx(1.75));
    CHECK(s.regret == doctest::Approx(4 * 0.5 - 1.75));
    CHECK(s.regret_ref == 0.5);
    CHECK(s.regret_ref_stderr == 0.01);
    CHECK(s.exploration_end == 2);
    CHECK(s.exploit_mean_reward == doctest::Approx(0.625));
    CHECK(s.wall_ms == 1.5);

    SUBCASE("a run with no completed phase counts everything as exploitation") {
        trace.phase_ends.clear();
        const RunSummary r = summarize_run(trace, ref, 1, 0, 0.0);
        CHECK(r.exploration_end == 0);
        CHECK(r.exploit_mean_reward == doctest::Approx(1.75 / 4.0));
    }
}

TEST_CASE("csv formatting") {
    CHECK(format_g9(0.123456789) == "0.123456789");
    CHECK(format_g9(0.001) == "0.001");
    CHECK(format_g9(0.0) == "0");
    CHECK(format_g9(123456789.25) == "123456789");
    CHECK(format_g9(1.0 / 3.0) == "0.333333333");
    CHECK(format_g9(1e-10) == "1e-10");
    CHECK(format_g9(-2.5) == "-2.5");

    CHECK(summary_csv_header() ==
          "method,epsilon,k,horizon,rep,seed,cum_reward,regret,regret_ref,regret_ref_stderr,"
          "exploration_end,exploit_mean_reward,wall_ms");

    RunSummary s;
    s.method = "sgb";
    s.epsilon = 0.25;
    s.k = 3;
    s.horizon = 1000;
    s.rep = 2;
    s.seed = 77;
    s.cum_reward = 12.5;
    s.regret = 487.5;
    s.regret_ref = 0.5;
    s.regret_ref_stderr = 0.0;
    s.exploration_end = 300;
    s.exploit_mean_reward = 0.625;
    s.wall_ms = 0.0;
    CHECK(summary_csv_row(s) == "sgb,0.25,3,1000,2,77,12.5,487.5,0.5,0,300,0.625,0");
}

TEST_CASE("config parsing") {
    SUBCASE("full influence config") {
        const std::string text = R"({
            "env": {"type": "influence", "path": "graph.txt", "p": 0.2, "oracle_reps": 50},
            "methods": [
                {"name": "sgb", "epsilon": 0.3},
                {"name": "etcg"},
                {"name": "sgb-anytime", "t_initial": 100},
                {"name": "random"}
            ],
            "k": [2, 3],
            "horizons": [100, 200],
            "repetitions": 4,
            "master_seed": 9,
            "reference": "brute",
            "output_dir": "out",
            "force": true,
            "write_traces": true,
            "record_wall_time": true,
            "jobs": 3
        })";
        const ExperimentConfig config = parse_experiment_config(text);
        CHECK(config.env.kind == EnvKind::influence);
        CHECK(config.env.path == "graph.txt");
        CHECK(config.env.p == 0.2);
        CHECK(config.env.oracle_reps == 50);
        REQUIRE(config.methods.size() == 4);
        CHECK(config.methods[0].epsilon == 0.3);
        CHECK(!config.methods[1].epsilon.has_value());
        CHECK(config.methods[2].t_initial == 100);
        CHECK(config.methods[3].name == "random");
        CHECK(config.k_values == std::vector<int>{2, 3});
        CHECK(config.horizons == std::vector<std::int64_t>{100, 200});
        CHECK(config.repetitions == 4);
        CHECK(config.master_seed == 9);
        CHECK(config.reference == ReferenceMethod::brute);
        CHECK(config.output_dir == "out");
        CHECK(config.force);
        CHECK(config.write_traces);
        CHECK(config.record_wall_time);
        CHECK(config.jobs == 3);
    }
    SUBCASE("defaults") {
        const ExperimentConfig config = parse_experiment_config(
            config_json("env.txt", "out"));
        CHECK(config.env.kind == EnvKind::coverage);
        CHECK(config.reference == ReferenceMethod::greedy);
        CHECK(!config.force);
        CHECK(!config.write_traces);
        CHECK(!config.record_wall_time);
        CHECK(config.jobs == 0);
    }
    SUBCASE("rejections") {
        auto bad = [](const std::string& text) { return parse_experiment_config(text); };
        const std::string env = R"("env": {"type": "coverage", "path": "e.txt"})";
        const std::string rest =
            R"("methods": [{"name": "sgb"}], "k": [2], "horizons": [100], "output_dir": "o")";

        CHECK_THROWS_WITH_AS(bad("{" + env + ", " + rest + R"(, "foo": 1})"),
                             doctest::Contains("unknown key 'foo'"), std::runtime_error);
        CHECK_THROWS_WITH_AS(
            bad("{" + env + R"(, "methods": [{"name": "ucb"}], "k": [2], "horizons": [100], "output_dir": "o"})"),
            doctest::Contains("unknown method"), std::runtime_error);
        CHECK_THROWS_WITH_AS(
            bad("{" + env + R"(, "methods": [{"name": "etcg", "epsilon": 0.2}], "k": [2], "horizons": [100], "output_dir": "o"})"),
            doctest::Contains("epsilon only applies"), std::runtime_error);
        CHECK_THROWS_WITH_AS(
            bad("{" + env + R"(, "methods": [{"name": "sgb", "t_initial": 50}], "k": [2], "horizons": [100], "output_dir": "o"})"),
            doctest::Contains("t_initial only applies"), std::runtime_error);
        CHECK_THROWS_WITH_AS(
            bad("{" + env + R"(, "methods": [{"name": "sgb", "epsilon": 0.0}], "k": [2], "horizons": [100], "output_dir": "o"})"),
            doctest::Contains("epsilon must lie"), std::runtime_error);
        CHECK_THROWS_WITH_AS(
            bad("{" + env + R"(, "methods": [{"name": "sgb"}], "k": [2], "horizons": [200, 100], "output_dir": "o"})"),
            doctest::Contains("ascending"), std::runtime_error);
        CHECK_THROWS_WITH_AS(
            bad("{" + env + R"(, "methods": [{"name": "sgb"}], "k": [2], "horizons": [100], "output_dir": "o", "reference": "exact"})"),
            doctest::Contains("reference"), std::runtime_error);
        CHECK_THROWS_WITH_AS(
            bad(R"({"env": {"type": "coverage", "path": "e.txt", "p": 0.5}, )" + rest + "}"),
            doctest::Contains("only apply to influence"), std::runtime_error);
        CHECK_THROWS_WITH_AS(bad("{" + rest + "}"), doctest::Contains("config:"),
                             std::runtime_error);
        CHECK_THROWS_WITH_AS(bad("{" + env + R"(, "methods": [{"name": "sgb"}], "k": [2], "horizons": [100]})"),
                             doctest::Contains("config:"), std::runtime_error);
        CHECK_THROWS_WITH_AS(bad("not json"), doctest::Contains("config:"), std::runtime_error);
    }
    SUBCASE("file loading reports the path") {
        CHECK_THROWS_WITH_AS(load_experiment_config("/nonexistent/config.json"),
                             doctest::Contains("cannot open"), std::runtime_error);
        const fs::path dir = fresh_dir("cfg");
        const fs::path path = dir / "bad.json";
        std::ofstream(path) << "{ not json";
        CHECK_THROWS_WITH_AS(load_experiment_config(path.string()),
                             doctest::Contains(("(in " + path.string() + ")").c_str()),
                             std::runtime_error);
    }
}

TEST_CASE("environment factory and sniffing") {
    const fs::path dir = fresh_dir("factory");
    const std::string coverage_path = write_coverage_file(dir);
    const fs::path graph_path = dir / "graph.txt";
    std::ofstream(graph_path) << "0 1\n1 2\n2 3\n";

    CHECK(sniff_env_kind(coverage_path) == EnvKind::coverage);
    CHECK(sniff_env_kind(graph_path.string()) == EnvKind::influence);
    CHECK_THROWS_AS(sniff_env_kind((dir / "missing.txt").string()), std::runtime_error);

    SUBCASE("coverage factory") {
        EnvSpec spec;
        spec.kind = EnvKind::coverage;
        spec.path = coverage_path;
        const EnvFactory factory(spec, 1);
        CHECK(factory.arm_count() == 12);
        const auto a = factory.create();
        const auto b = factory.create();
        const std::vector<int> action{0, 4, 7};
        CHECK(a->expected_value(action).mean == b->expected_value(action).mean);
        CHECK(a->exact_oracle());
    }
    SUBCASE("influence factory") {
        EnvSpec spec;
        spec.kind = EnvKind::influence;
        spec.path = graph_path.string();
        spec.p = 0.2;
        spec.oracle_reps = 25;
        const EnvFactory factory(spec, 31);
        CHECK(factory.arm_count() == 4);
        const auto a = factory.create();
        const auto b = factory.create();
        CHECK(!a->exact_oracle());
        const std::vector<int> action{1};
        CHECK(a->expected_value(action).mean == b->expected_value(action).mean);
    }
}

TEST_CASE("experiments end to end") {
    const fs::path dir = fresh_dir("e2e");
    const std::string env_path = write_coverage_file(dir);

    SUBCASE("summaries, cell order, and the summary file") {
        const std::string out_dir = (dir / "out").string();
        const ExperimentConfig config = parse_experiment_config(config_json(env_path, out_dir));
        const ExperimentResult result = run_experiment(config);

        CHECK(result.errors.empty());
        REQUIRE(result.summaries.size() == 3);
        for (int rep = 0; rep < 3; ++rep) {
            const RunSummary& s = result.summaries[static_cast<std::size_t>(rep)];
            CHECK(s.method == "sgb");
            CHECK(s.k == 3);
            CHECK(s.horizon == 1000);
            CHECK(s.rep == rep);
            CHECK(s.epsilon == doctest::Approx(compute_epsilon_star(12, 3, 1000)));
            CHECK(s.regret ==
                  doctest::Approx(1000.0 * s.regret_ref - s.cum_reward).epsilon(1e-9));
            CHECK(s.wall_ms == 0.0);
        }
        CHECK(result.summaries[0].seed != result.summaries[1].seed);
        CHECK(result.summaries[1].seed != result.summaries[2].seed);

        CHECK(result.summary_path == (fs::path(out_dir) / "summary.csv").string());
        const std::string text = slurp(result.summary_path);
        CHECK(text.rfind(summary_csv_header() + "\n", 0) == 0);
        CHECK(std::count(text.begin(), text.end(), '\n') == 4);
        CHECK(!fs::exists(fs::path(out_dir) / "errors.log"));
    }
    SUBCASE("reruns and thread counts do not change the bytes") {
        ExperimentConfig config =
            parse_experiment_config(config_json(env_path, (dir / "out_a").string()));
        config.jobs = 1;
        run_experiment(config);
        config.output_dir = (dir / "out_b").string();
        config.jobs = 4;
        run_experiment(config);
        config.output_dir = (dir / "out_c").string();
        config.jobs = 4;
        run_experiment(config);
        const std::string a = slurp(dir / "out_a" / "summary.csv");
        CHECK(a == slurp(dir / "out_b" / "summary.csv"));
        CHECK(a == slurp(dir / "out_c" / "summary.csv"));
    }
    SUBCASE("trace files") {
        ExperimentConfig config = parse_experiment_config(
            config_json(env_path, (dir / "out_t").string(), "  \"write_traces\": true\n"));
        run_experiment(config);
        const fs::path trace_path = dir / "out_t" / "trace_m0_sgb_k3_T1000_rep0.csv";
        REQUIRE(fs::exists(trace_path));
        const std::string text = slurp(trace_path);
        CHECK(std::count(text.begin(), text.end(), '\n') == 1001);
        CHECK(text.rfind("t,phase,action_size,reward,cum_reward\n", 0) == 0);
    }
    SUBCASE("horizons that cannot run are rejected up front") {
        ExperimentConfig config = parse_experiment_config(config_json(env_path, (dir / "out_bad").string()));
        config.horizons = {50};
        CHECK_THROWS_WITH_AS(run_experiment(config), doctest::Contains("horizon check failed"),
                             std::invalid_argument);
        config.force = true;
        const ExperimentResult result = run_experiment(config);
        CHECK(result.errors.empty());
        CHECK(result.summaries.size() == 3);
    }
    SUBCASE("oversized k is rejected") {
        ExperimentConfig config = parse_experiment_config(config_json(env_path, (dir / "out_k").string()));
        config.k_values = {40};
        CHECK_THROWS_WITH_AS(run_experiment(config), doctest::Contains("exceeds"),
                             std::invalid_argument);
    }
}
