#include "sgb/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "sgb/algorithms.hpp"
#include "sgb/cascade.hpp"
#include "sgb/coverage.hpp"
#include "sgb/graph.hpp"
#include "sgb/metrics.hpp"
#include "sgb/offline.hpp"

namespace sgb {

namespace {

using nlohmann::json;

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return in;
}

void ensure_known_keys(const json& j, std::initializer_list<const char*> allowed,
                       const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) throw std::runtime_error("config: unknown key '" + it.key() + "' in " + where);
    }
}

EnvSpec parse_env_spec(const json& j) {
    if (!j.is_object()) throw std::runtime_error("config: 'env' must be an object");
    ensure_known_keys(j, {"type", "path", "p", "oracle_reps"}, "env");
    EnvSpec spec;
    const std::string type = j.at("type").get<std::string>();
    if (type == "coverage") {
        spec.kind = EnvKind::coverage;
        if (j.contains("p") || j.contains("oracle_reps"))
            throw std::runtime_error("config: 'p'/'oracle_reps' only apply to influence envs");
    } else if (type == "influence") {
        spec.kind = EnvKind::influence;
        spec.p = j.value("p", 0.1);
        spec.oracle_reps = j.value("oracle_reps", std::int64_t{1000});
    } else {
        throw std::runtime_error("config: env type must be 'coverage' or 'influence'");
    }
    spec.path = j.at("path").get<std::string>();
    if (spec.path.empty()) throw std::runtime_error("config: env path must be nonempty");
    if (spec.p < 0.0 || spec.p > 1.0) throw std::runtime_error("config: p must lie in [0, 1]");
    if (spec.oracle_reps < 1) throw std::runtime_error("config: oracle_reps must be at least 1");
    return spec;
}

MethodSpec parse_method_spec(const json& j) {
    if (!j.is_object()) throw std::runtime_error("config: each method must be an object");
    ensure_known_keys(j, {"name", "epsilon", "t_initial"}, "methods");
    MethodSpec spec;
    spec.name = j.at("name").get<std::string>();
    if (spec.name != "sgb" && spec.name != "etcg" && spec.name != "sgb-anytime" &&
        spec.name != "random")
        throw std::runtime_error("config: unknown method '" + spec.name + "'");
    if (j.contains("epsilon")) {
        if (spec.name != "sgb")
            throw std::runtime_error("config: epsilon only applies to method 'sgb'");
        spec.epsilon = j.at("epsilon").get<double>();
        if (!(*spec.epsilon > 0.0) || *spec.epsilon > 1.0)
            throw std::runtime_error("config: epsilon must lie in (0, 1]");
    }
    if (j.contains("t_initial")) {
        if (spec.name != "sgb-anytime")
            throw std::runtime_error("config: t_initial only applies to method 'sgb-anytime'");
        spec.t_initial = j.at("t_initial").get<std::int64_t>();
        if (*spec.t_initial < 2) throw std::runtime_error("config: t_initial must be at least 2");
    }
    return spec;
}

// True when the full schedule (with the epsilon this method will actually
// use) fits the horizon and the horizon inequality holds.
bool schedule_fits(int n, int k, std::int64_t t_horizon, std::optional<double> epsilon) {
    if (k > n) return false;
    const HorizonReport report = validate_horizon(n, k, t_horizon);
    const DerivedParams derived = derive_params(n, k, t_horizon, epsilon);
    return report.horizon_ok && exploration_length(derived.params) <= t_horizon;
}

struct Cell {
    std::size_t method_index = 0;
    int k = 0;
    std::int64_t horizon = 0;
    int rep = 0;
    std::uint64_t seed = 0;
};

std::string cell_label(const ExperimentConfig& config, const Cell& cell) {
    std::ostringstream out;
    out << "method=" << config.methods[cell.method_index].name << " k=" << cell.k
        << " T=" << cell.horizon << " rep=" << cell.rep;
    return out.str();
}

std::string trace_file_name(const ExperimentConfig& config, const Cell& cell) {
    std::ostringstream out;
    out << "trace_m" << cell.method_index << "_" << config.methods[cell.method_index].name << "_k"
        << cell.k << "_T" << cell.horizon << "_rep" << cell.rep << ".csv";
    return out.str();
}

RunTrace execute_cell(const ExperimentConfig& config, const Cell& cell, Environment& env,
                      Rng& rng) {
    const MethodSpec& method = config.methods[cell.method_index];
    SgbOptions options;
    options.force = config.force;
    if (method.name == "sgb") return run_sgb(env, cell.k, cell.horizon, method.epsilon, rng, options);
    if (method.name == "etcg") return run_etcg(env, cell.k, cell.horizon, rng, options);
    if (method.name == "random") return run_random_constant(env, cell.k, cell.horizon, rng);
    const std::int64_t t_initial =
        method.t_initial.value_or(minimal_valid_horizon(env.arm_count(), cell.k));
    return run_sgb_anytime(env, cell.k, t_initial, cell.horizon, rng);
}

} // namespace

EnvKind sniff_env_kind(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::string token;
    in >> token;
    return token == "arms" ? EnvKind::coverage : EnvKind::influence;
}

struct EnvFactory::Data {
    CoverageInstance coverage;
    std::shared_ptr<const Graph> graph;
};

EnvFactory::EnvFactory(const EnvSpec& spec, std::uint64_t oracle_seed)
    : spec_(spec), oracle_seed_(oracle_seed), data_(std::make_unique<Data>()) {
    std::ifstream in = open_or_throw(spec_.path);
    if (spec_.kind == EnvKind::coverage) {
        data_->coverage = load_coverage(in);
    } else {
        EdgeListResult loaded = load_edge_list(in);
        data_->graph = std::make_shared<const Graph>(std::move(loaded.graph));
    }
}

EnvFactory::~EnvFactory() = default;

std::unique_ptr<Environment> EnvFactory::create() const {
    if (spec_.kind == EnvKind::coverage) return std::make_unique<CoverageEnv>(data_->coverage);
    return std::make_unique<InfluenceEnv>(data_->graph, spec_.p, spec_.oracle_reps, oracle_seed_);
}

int EnvFactory::arm_count() const {
    return spec_.kind == EnvKind::coverage ? data_->coverage.arm_count : data_->graph->node_count;
}

namespace {

ExperimentConfig parse_experiment_config_impl(const std::string& json_text) {
    const json j = json::parse(json_text);
    if (!j.is_object()) throw std::runtime_error("config: top level must be an object");
    ensure_known_keys(j,
                      {"env", "methods", "k", "horizons", "repetitions", "master_seed", "reference",
                       "output_dir", "force", "write_traces", "record_wall_time", "jobs"},
                      "the top level");

    ExperimentConfig config;
    config.env = parse_env_spec(j.at("env"));

    if (!j.contains("methods") || !j.at("methods").is_array() || j.at("methods").empty())
        throw std::runtime_error("config: 'methods' must be a nonempty array");
    for (const json& m : j.at("methods")) config.methods.push_back(parse_method_spec(m));

    config.k_values = j.at("k").get<std::vector<int>>();
    if (config.k_values.empty()) throw std::runtime_error("config: 'k' must be nonempty");
    for (int k : config.k_values)
        if (k < 1) throw std::runtime_error("config: every k must be at least 1");

    config.horizons = j.at("horizons").get<std::vector<std::int64_t>>();
    if (config.horizons.empty()) throw std::runtime_error("config: 'horizons' must be nonempty");
    for (std::size_t i = 0; i < config.horizons.size(); ++i) {
        if (config.horizons[i] < 2)
            throw std::runtime_error("config: every horizon must be at least 2");
        if (i > 0 && config.horizons[i] <= config.horizons[i - 1])
            throw std::runtime_error("config: horizons must be strictly ascending");
    }

    config.repetitions = j.value("repetitions", 10);
    if (config.repetitions < 1) throw std::runtime_error("config: repetitions must be at least 1");
    config.master_seed = j.value("master_seed", std::uint64_t{0});

    const std::string reference = j.value("reference", std::string("greedy"));
    if (reference == "greedy")
        config.reference = ReferenceMethod::greedy;
    else if (reference == "brute")
        config.reference = ReferenceMethod::brute;
    else
        throw std::runtime_error("config: reference must be 'greedy' or 'brute'");

    config.output_dir = j.at("output_dir").get<std::string>();
    if (config.output_dir.empty()) throw std::runtime_error("config: output_dir must be nonempty");
    config.force = j.value("force", false);
    config.write_traces = j.value("write_traces", false);
    config.record_wall_time = j.value("record_wall_time", false);
    config.jobs = j.value("jobs", 0);
    if (config.jobs < 0) throw std::runtime_error("config: jobs must be nonnegative");
    return config;
}

} // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    try {
        return parse_experiment_config_impl(json_text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("config: ") + e.what());
    }
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_experiment_config(buffer.str());
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string(e.what()) + " (in " + path + ")");
    }
}

ReferenceValue compute_reference_value(const Environment& env, int k, ReferenceMethod method) {
    const SetOracle oracle = [&env](std::span<const int> action) {
        return env.expected_value(action).mean;
    };
    ReferenceValue ref;
    if (method == ReferenceMethod::greedy) {
        OfflineResult greedy = offline_greedy(oracle, env.arm_count(), k);
        ref.value = greedy.value;
        ref.selected = std::move(greedy.selected);
        ref.std_error = env.expected_value(ref.selected).std_error;
    } else {
        OfflineResult opt = brute_force_opt(oracle, env.arm_count(), k);
        const double scale = 1.0 - 1.0 / std::exp(1.0);
        ref.value = scale * opt.value;
        ref.selected = std::move(opt.selected);
        ref.std_error = scale * env.expected_value(ref.selected).std_error;
    }
    return ref;
}

RunSummary summarize_run(const RunTrace& trace, const ReferenceValue& ref, std::uint64_t seed,
                         int rep, double wall_ms) {
    RunSummary s;
    s.method = trace.method;
    s.epsilon = trace.params.epsilon;
    s.k = trace.params.k;
    s.horizon = trace.params.t_horizon;
    s.rep = rep;
    s.seed = seed;
    for (double r : trace.rewards) s.cum_reward += r;
    s.regret = static_cast<double>(trace.step_count()) * ref.value - s.cum_reward;
    s.regret_ref = ref.value;
    s.regret_ref_stderr = ref.std_error;
    s.exploration_end = trace.exploration_end();
    const std::int64_t exploit_steps = trace.step_count() - s.exploration_end;
    if (exploit_steps > 0) {
        double sum = 0.0;
        for (std::int64_t t = s.exploration_end; t < trace.step_count(); ++t)
            sum += trace.rewards[static_cast<std::size_t>(t)];
        s.exploit_mean_reward = sum / static_cast<double>(exploit_steps);
    }
    s.wall_ms = wall_ms;
    return s;
}

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string summary_csv_header() {
    return "method,epsilon,k,horizon,rep,seed,cum_reward,regret,regret_ref,regret_ref_stderr,"
           "exploration_end,exploit_mean_reward,wall_ms";
}

std::string summary_csv_row(const RunSummary& s) {
    std::ostringstream out;
    out << s.method << ',' << format_g9(s.epsilon) << ',' << s.k << ',' << s.horizon << ','
        << s.rep << ',' << s.seed << ',' << format_g9(s.cum_reward) << ',' << format_g9(s.regret)
        << ',' << format_g9(s.regret_ref) << ',' << format_g9(s.regret_ref_stderr) << ','
        << s.exploration_end << ',' << format_g9(s.exploit_mean_reward) << ','
        << format_g9(s.wall_ms);
    return out.str();
}

void write_trace_csv(const RunTrace& trace, std::ostream& out) {
    const std::vector<int> phases = phase_per_step(trace);
    out << "t,phase,action_size,reward,cum_reward\n";
    double cum = 0.0;
    for (std::size_t t = 0; t < trace.rewards.size(); ++t) {
        cum += trace.rewards[t];
        out << (t + 1) << ',' << phases[t] << ',' << trace.actions[t].size() << ','
            << format_g9(trace.rewards[t]) << ',' << format_g9(cum) << '\n';
    }
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
    const std::uint64_t oracle_seed = splitmix64(config.master_seed ^ kOracleSeedSalt);
    EnvFactory factory(config.env, oracle_seed);
    const int n = factory.arm_count();

    // Fail fast on any cell whose schedule cannot run as configured.
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        const MethodSpec& method = config.methods[mi];
        for (int k : config.k_values) {
            if (k > n)
                throw std::invalid_argument("config: k=" + std::to_string(k) + " exceeds n=" +
                                            std::to_string(n));
            for (std::int64_t t : config.horizons) {
                if (method.name == "random") continue;
                if (method.name == "sgb-anytime") {
                    const std::int64_t floor_horizon = minimal_valid_horizon(n, k);
                    const std::int64_t t_initial = method.t_initial.value_or(floor_horizon);
                    if (t_initial < floor_horizon)
                        throw std::invalid_argument(
                            "config: t_initial " + std::to_string(t_initial) +
                            " is below the minimal valid horizon " + std::to_string(floor_horizon) +
                            " for k=" + std::to_string(k));
                    continue;
                }
                const std::optional<double> epsilon =
                    method.name == "etcg" ? std::optional<double>(std::exp(-static_cast<double>(k)))
                                          : method.epsilon;
                if (!schedule_fits(n, k, t, epsilon) && !config.force)
                    throw std::invalid_argument("config: horizon check failed for method=" +
                                                method.name + " k=" + std::to_string(k) +
                                                " T=" + std::to_string(t) +
                                                " (set force to run anyway)");
            }
        }
    }

    std::vector<ReferenceValue> references;
    {
        const std::unique_ptr<Environment> env = factory.create();
        references.reserve(config.k_values.size());
        for (int k : config.k_values)
            references.push_back(compute_reference_value(*env, k, config.reference));
    }

    std::vector<Cell> cells;
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
        for (int k : config.k_values) {
            for (std::int64_t t : config.horizons) {
                for (int rep = 0; rep < config.repetitions; ++rep) {
                    Cell cell;
                    cell.method_index = mi;
                    cell.k = k;
                    cell.horizon = t;
                    cell.rep = rep;
                    cell.seed = derive_run_seed(config.master_seed, mi,
                                                static_cast<std::uint64_t>(k),
                                                static_cast<std::uint64_t>(t),
                                                static_cast<std::uint64_t>(rep));
                    cells.push_back(cell);
                }
            }
        }
    }

    std::filesystem::create_directories(config.output_dir);

    std::vector<std::optional<RunSummary>> slots(cells.size());
    std::vector<std::string> error_slots(cells.size());
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;

    auto reference_for_k = [&](int k) -> const ReferenceValue& {
        for (std::size_t i = 0; i < config.k_values.size(); ++i)
            if (config.k_values[i] == k) return references[i];
        throw std::logic_error("missing reference value");
    };

    auto worker = [&]() {
        while (true) {
            const std::size_t index = next.fetch_add(1);
            if (index >= cells.size()) return;
            const Cell& cell = cells[index];
            try {
                const std::unique_ptr<Environment> env = factory.create();
                Rng rng(cell.seed);
                const auto start = std::chrono::steady_clock::now();
                const RunTrace trace = execute_cell(config, cell, *env, rng);
                double wall_ms = 0.0;
                if (config.record_wall_time) {
                    const auto elapsed = std::chrono::steady_clock::now() - start;
                    wall_ms = std::chrono::duration<double, std::milli>(elapsed).count();
                }
                slots[index] =
                    summarize_run(trace, reference_for_k(cell.k), cell.seed, cell.rep, wall_ms);
                if (config.write_traces) {
                    const std::filesystem::path path =
                        std::filesystem::path(config.output_dir) / trace_file_name(config, cell);
                    std::ofstream out(path, std::ios::binary);
                    if (!out) throw std::runtime_error("cannot write " + path.string());
                    write_trace_csv(trace, out);
                }
                std::lock_guard<std::mutex> lock(log_mutex);
                std::cerr << "cell " << cell_label(config, cell) << " done\n";
            } catch (const std::exception& e) {
                error_slots[index] = "cell " + cell_label(config, cell) + " failed: " + e.what();
                std::lock_guard<std::mutex> lock(log_mutex);
                std::cerr << error_slots[index] << "\n";
            }
        }
    };

    std::size_t jobs = config.jobs > 0 ? static_cast<std::size_t>(config.jobs)
                                       : std::max(1u, std::thread::hardware_concurrency());
    jobs = std::min(jobs, cells.size());
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t i = 0; i < jobs; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();

    ExperimentResult result;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (slots[i].has_value()) result.summaries.push_back(std::move(*slots[i]));
        if (!error_slots[i].empty()) result.errors.push_back(std::move(error_slots[i]));
    }

    const std::filesystem::path summary_path =
        std::filesystem::path(config.output_dir) / "summary.csv";
    {
        std::ofstream out(summary_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + summary_path.string());
        out << summary_csv_header() << '\n';
        for (const RunSummary& s : result.summaries) out << summary_csv_row(s) << '\n';
    }
    result.summary_path = summary_path.string();

    if (!result.errors.empty()) {
        std::ofstream out(std::filesystem::path(config.output_dir) / "errors.log",
                          std::ios::binary);
        for (const std::string& e : result.errors) out << e << '\n';
    }
    return result;
}

} // namespace sgb
