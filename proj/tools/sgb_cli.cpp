#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "sgb/algorithms.hpp"
#include "sgb/bandit_core.hpp"
#include "sgb/clean_event.hpp"
#include "sgb/experiment.hpp"
#include "sgb/offline.hpp"

namespace {

struct EnvFlags {
    std::string path;
    std::string type; // "", "coverage", "influence"
    double p = 0.1;
    std::int64_t mc_reps = 1000;
    std::uint64_t oracle_seed = 0;
};

void add_env_flags(CLI::App* cmd, EnvFlags& flags) {
    cmd->add_option("--env", flags.path, "environment file: coverage instance or edge list")
        ->required();
    cmd->add_option("--env-type", flags.type, "coverage|influence (default: detect from file)")
        ->check(CLI::IsMember({"coverage", "influence"}));
    cmd->add_option("--p", flags.p, "infection probability (influence envs)");
    cmd->add_option("--mc-reps", flags.mc_reps,
                    "cascades per expected-value oracle call (influence envs)");
    cmd->add_option("--oracle-seed", flags.oracle_seed,
                    "seed of the expected-value oracle stream (influence envs)");
}

sgb::EnvFactory make_factory(const EnvFlags& flags) {
    sgb::EnvSpec spec;
    spec.kind = flags.type.empty()
                    ? sgb::sniff_env_kind(flags.path)
                    : (flags.type == "coverage" ? sgb::EnvKind::coverage : sgb::EnvKind::influence);
    spec.path = flags.path;
    spec.p = flags.p;
    spec.oracle_reps = flags.mc_reps;
    return sgb::EnvFactory(spec, sgb::splitmix64(flags.oracle_seed ^ sgb::kOracleSeedSalt));
}

std::string join_ids(const std::vector<int>& ids) {
    std::string out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) out += ",";
        out += std::to_string(ids[i]);
    }
    return out;
}

void cmd_validate(int n, int k, std::int64_t horizon) {
    const sgb::HorizonReport r = sgb::validate_horizon(n, k, horizon);
    std::cout << "n=" << r.n << " k=" << r.k << " horizon=" << r.t_horizon << "\n";
    std::cout << "horizon_check: n(k+1)sqrt(ln T) = " << sgb::format_g9(r.horizon_lhs)
              << (r.horizon_ok ? " <= " : " > ") << r.t_horizon << " -> "
              << (r.horizon_ok ? "ok" : "FAIL") << "\n";
    std::cout << "epsilon_star=" << sgb::format_g9(r.epsilon_star)
              << (r.epsilon_clamped ? " (clamped to run)" : "") << "\n";
    std::cout << "m=" << r.m << " beta=" << sgb::format_g9(r.beta) << " s1=" << r.s1 << "\n";
    std::cout << "exploration_steps=" << r.exploration_steps << " budget: "
              << (r.budget_ok ? "ok" : "FAIL") << "\n";
    std::cout << "valid: " << (r.valid() ? "yes" : "no") << "\n";
}

void cmd_run(const EnvFlags& env_flags, const std::string& method, std::optional<double> epsilon,
             int k, std::int64_t horizon, std::uint64_t seed, std::optional<std::int64_t> t_initial,
             bool force, const std::string& trace_out, const std::string& reference, bool time_run) {
    const sgb::EnvFactory factory = make_factory(env_flags);
    const std::unique_ptr<sgb::Environment> env = factory.create();
    sgb::Rng rng(seed);

    sgb::SgbOptions options;
    options.force = force;

    const auto start = std::chrono::steady_clock::now();
    sgb::RunTrace trace;
    if (method == "sgb") {
        trace = sgb::run_sgb(*env, k, horizon, epsilon, rng, options);
    } else if (method == "etcg") {
        trace = sgb::run_etcg(*env, k, horizon, rng, options);
    } else if (method == "random") {
        trace = sgb::run_random_constant(*env, k, horizon, rng);
    } else {
        const std::int64_t t0 =
            t_initial.value_or(sgb::minimal_valid_horizon(env->arm_count(), k));
        trace = sgb::run_sgb_anytime(*env, k, t0, horizon, rng);
    }
    double wall_ms = 0.0;
    if (time_run) {
        const auto elapsed = std::chrono::steady_clock::now() - start;
        wall_ms = std::chrono::duration<double, std::milli>(elapsed).count();
    }

    const sgb::ReferenceValue ref = sgb::compute_reference_value(
        *env, k,
        reference == "brute" ? sgb::ReferenceMethod::brute : sgb::ReferenceMethod::greedy);
    const sgb::RunSummary summary = sgb::summarize_run(trace, ref, seed, 0, wall_ms);
    std::cout << sgb::summary_csv_header() << "\n" << sgb::summary_csv_row(summary) << "\n";

    if (!trace_out.empty()) {
        std::ofstream out(trace_out, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + trace_out);
        sgb::write_trace_csv(trace, out);
    }
}

int cmd_sweep(const std::string& config_path, int jobs_flag, const std::string& out_flag) {
    sgb::ExperimentConfig config = sgb::load_experiment_config(config_path);
    if (const char* env_dir = std::getenv("SGB_OUTPUT_DIR")) config.output_dir = env_dir;
    if (!out_flag.empty()) config.output_dir = out_flag;
    if (const char* env_jobs = std::getenv("SGB_JOBS")) config.jobs = std::atoi(env_jobs);
    if (jobs_flag > 0) config.jobs = jobs_flag;

    const sgb::ExperimentResult result = sgb::run_experiment(config);
    std::cout << "wrote " << result.summary_path << " (" << result.summaries.size() << " runs, "
              << result.errors.size() << " failed)\n";
    return result.errors.empty() ? 0 : 1;
}

void cmd_offline(const EnvFlags& env_flags, int k, const std::string& algo,
                 std::optional<double> epsilon, std::uint64_t seed) {
    const sgb::EnvFactory factory = make_factory(env_flags);
    const std::unique_ptr<sgb::Environment> env = factory.create();
    const sgb::SetOracle oracle = [&env](std::span<const int> action) {
        return env->expected_value(action).mean;
    };

    sgb::OfflineResult result;
    if (algo == "greedy") {
        result = sgb::offline_greedy(oracle, env->arm_count(), k);
    } else if (algo == "stochastic-greedy") {
        if (!epsilon.has_value())
            throw CLI::ValidationError("--epsilon is required for --algo stochastic-greedy");
        sgb::Rng rng(seed);
        result = sgb::offline_stochastic_greedy(oracle, env->arm_count(), k, *epsilon, rng);
    } else {
        result = sgb::brute_force_opt(oracle, env->arm_count(), k);
    }
    std::cout << "algo=" << algo << " selected=" << join_ids(result.selected)
              << " value=" << sgb::format_g9(result.value) << " evaluations=" << result.evaluations
              << "\n";
}

void cmd_diagnose_clean_event(const EnvFlags& env_flags, int k, std::int64_t horizon,
                              std::int64_t reps, std::uint64_t seed,
                              std::optional<double> epsilon) {
    const sgb::EnvFactory factory = make_factory(env_flags);
    const std::unique_ptr<sgb::Environment> env = factory.create();
    const sgb::DerivedParams derived =
        sgb::derive_params(env->arm_count(), k, horizon, epsilon);
    sgb::Rng rng(seed);
    const double rate = sgb::estimate_clean_event_rate(*env, derived.params, reps, rng);
    const double bound = 1.0 - 2.0 / static_cast<double>(horizon);
    std::cout << "clean_event_rate=" << sgb::format_g9(rate) << " bound=" << sgb::format_g9(bound)
              << " (1 - 2/T, T=" << horizon << ")"
              << " m=" << derived.params.m << " rad=" << sgb::format_g9(derived.params.rad)
              << " reps=" << reps << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Combinatorial bandit runner: explore-then-commit greedy algorithms with "
                 "submodular reward environments"};
    app.require_subcommand(1);

    // validate
    int v_n = 0, v_k = 0;
    std::int64_t v_horizon = 0;
    CLI::App* validate = app.add_subcommand("validate", "check a (n, k, horizon) configuration");
    validate->add_option("--n", v_n, "number of arms")->required();
    validate->add_option("--k", v_k, "cardinality constraint")->required();
    validate->add_option("--horizon", v_horizon, "time horizon T")->required();

    // run
    EnvFlags r_env;
    std::string r_method;
    double r_epsilon = 0.0;
    int r_k = 0;
    std::int64_t r_horizon = 0;
    std::uint64_t r_seed = 0;
    std::int64_t r_t_initial = 0;
    bool r_force = false, r_time = false;
    std::string r_trace_out, r_reference = "greedy";
    CLI::App* run = app.add_subcommand("run", "execute a single online run");
    add_env_flags(run, r_env);
    run->add_option("--method", r_method, "sgb|etcg|sgb-anytime|random")
        ->required()
        ->check(CLI::IsMember({"sgb", "etcg", "sgb-anytime", "random"}));
    CLI::Option* r_eps_opt = run->add_option("--epsilon", r_epsilon, "subsampling parameter (sgb)");
    run->add_option("--k", r_k, "cardinality constraint")->required();
    run->add_option("--horizon", r_horizon, "time horizon T")->required();
    run->add_option("--seed", r_seed, "run seed");
    CLI::Option* r_t0_opt =
        run->add_option("--t-initial", r_t_initial, "first window length (sgb-anytime)");
    run->add_flag("--force", r_force, "run even if the horizon check fails");
    run->add_option("--trace-out", r_trace_out, "write the per-step trace CSV here");
    run->add_option("--reference", r_reference, "regret reference: greedy|brute")
        ->check(CLI::IsMember({"greedy", "brute"}));
    run->add_flag("--time", r_time, "record wall time in the summary");

    // sweep
    std::string s_config, s_output_dir;
    int s_jobs = 0;
    CLI::App* sweep = app.add_subcommand("sweep", "execute an experiment config");
    sweep->add_option("--config", s_config, "JSON experiment config")->required();
    sweep->add_option("--jobs", s_jobs, "worker threads (overrides config and SGB_JOBS)");
    sweep->add_option("--output-dir", s_output_dir,
                      "output directory (overrides config and SGB_OUTPUT_DIR)");

    // offline
    EnvFlags o_env;
    int o_k = 0;
    std::string o_algo = "greedy";
    double o_epsilon = 0.0;
    std::uint64_t o_seed = 0;
    CLI::App* offline = app.add_subcommand("offline", "run an offline oracle on the environment");
    add_env_flags(offline, o_env);
    offline->add_option("--k", o_k, "cardinality constraint")->required();
    offline->add_option("--algo", o_algo, "greedy|stochastic-greedy|brute")
        ->check(CLI::IsMember({"greedy", "stochastic-greedy", "brute"}));
    CLI::Option* o_eps_opt =
        offline->add_option("--epsilon", o_epsilon, "subsampling parameter (stochastic-greedy)");
    offline->add_option("--seed", o_seed, "sampling seed (stochastic-greedy)");

    // diagnose clean-event
    EnvFlags d_env;
    int d_k = 0;
    std::int64_t d_horizon = 0, d_reps = 0;
    std::uint64_t d_seed = 0;
    double d_epsilon = 0.0;
    CLI::App* diagnose = app.add_subcommand("diagnose", "statistical diagnostics");
    diagnose->require_subcommand(1);
    CLI::App* clean_event = diagnose->add_subcommand(
        "clean-event", "frequency of all empirical means staying within the confidence radius");
    add_env_flags(clean_event, d_env);
    clean_event->add_option("--k", d_k, "cardinality constraint")->required();
    clean_event->add_option("--horizon", d_horizon, "time horizon T")->required();
    clean_event->add_option("--reps", d_reps, "number of exploration runs")->required();
    clean_event->add_option("--seed", d_seed, "run seed");
    CLI::Option* d_eps_opt =
        clean_event->add_option("--epsilon", d_epsilon, "subsampling parameter override");

    int exit_code = 0;
    try {
        app.parse(argc, argv);

        if (*validate) {
            cmd_validate(v_n, v_k, v_horizon);
        } else if (*run) {
            if (r_eps_opt->count() > 0 && r_method != "sgb")
                throw CLI::ValidationError("--epsilon only applies to --method sgb");
            if (r_t0_opt->count() > 0 && r_method != "sgb-anytime")
                throw CLI::ValidationError("--t-initial only applies to --method sgb-anytime");
            cmd_run(r_env, r_method,
                    r_eps_opt->count() > 0 ? std::optional<double>(r_epsilon) : std::nullopt, r_k,
                    r_horizon, r_seed,
                    r_t0_opt->count() > 0 ? std::optional<std::int64_t>(r_t_initial) : std::nullopt,
                    r_force, r_trace_out, r_reference, r_time);
        } else if (*sweep) {
            exit_code = cmd_sweep(s_config, s_jobs, s_output_dir);
        } else if (*offline) {
            if (o_eps_opt->count() > 0 && o_algo != "stochastic-greedy")
                throw CLI::ValidationError("--epsilon only applies to --algo stochastic-greedy");
            cmd_offline(o_env, o_k, o_algo,
                        o_eps_opt->count() > 0 ? std::optional<double>(o_epsilon) : std::nullopt,
                        o_seed);
        } else if (*diagnose) {
            cmd_diagnose_clean_event(
                d_env, d_k, d_horizon, d_reps, d_seed,
                d_eps_opt->count() > 0 ? std::optional<double>(d_epsilon) : std::nullopt);
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
