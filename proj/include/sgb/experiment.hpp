#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sgb/bandit_core.hpp"
#include "sgb/environment.hpp"

namespace sgb {

enum class EnvKind { coverage, influence };

struct EnvSpec {
    EnvKind kind = EnvKind::coverage;
    std::string path;                // coverage instance file or edge list
    double p = 0.1;                  // influence only: infection probability
    std::int64_t oracle_reps = 1000; // influence only: cascades per oracle call
};

// Reads the first token of the file: coverage instances start with "arms",
// anything else is treated as an edge list.
EnvKind sniff_env_kind(const std::string& path);

// Loads the environment data once; create() hands out lightweight per-thread
// instances sharing it. The oracle seed pins the Monte Carlo expected-value
// stream for influence environments.
class EnvFactory {
public:
    EnvFactory(const EnvSpec& spec, std::uint64_t oracle_seed);
    ~EnvFactory();
    EnvFactory(const EnvFactory&) = delete;
    EnvFactory& operator=(const EnvFactory&) = delete;

    std::unique_ptr<Environment> create() const;
    int arm_count() const;
    const EnvSpec& spec() const { return spec_; }

private:
    struct Data;
    EnvSpec spec_;
    std::uint64_t oracle_seed_;
    std::unique_ptr<Data> data_;
};

struct MethodSpec {
    std::string name;                      // sgb | etcg | sgb-anytime | random
    std::optional<double> epsilon;         // sgb only
    std::optional<std::int64_t> t_initial; // sgb-anytime only
};

enum class ReferenceMethod {
    greedy, // f_ref = f(S of offline greedy)
    brute   // f_ref = (1 - 1/e) * f(optimal set), small instances only
};

struct ExperimentConfig {
    EnvSpec env;
    std::vector<MethodSpec> methods;
    std::vector<int> k_values;
    std::vector<std::int64_t> horizons; // ascending
    int repetitions = 10;
    std::uint64_t master_seed = 0;
    ReferenceMethod reference = ReferenceMethod::greedy;
    std::string output_dir;
    bool force = false;            // run cells that fail the horizon check
    bool write_traces = false;     // one trace CSV per run
    bool record_wall_time = false; // off by default so reruns are byte-identical
    int jobs = 0;                  // worker threads; 0 = hardware concurrency
};

// JSON config schema is documented in the README. Paths inside the config are
// resolved relative to the current working directory.
ExperimentConfig parse_experiment_config(const std::string& json_text);
ExperimentConfig load_experiment_config(const std::string& path);

struct RunSummary {
    std::string method;
    double epsilon = 0.0; // actual value used; 0 for random
    int k = 0;
    std::int64_t horizon = 0;
    int rep = 0;
    std::uint64_t seed = 0;
    double cum_reward = 0.0;
    double regret = 0.0;            // horizon * f_ref - cum_reward
    double regret_ref = 0.0;        // the per-step reference value f_ref
    double regret_ref_stderr = 0.0; // Monte Carlo std-error of f_ref, 0 if exact
    std::int64_t exploration_end = 0;
    double exploit_mean_reward = 0.0; // mean reward after exploration_end; 0 if none
    double wall_ms = 0.0;             // 0 unless wall-time recording is on
};

struct ReferenceValue {
    double value = 0.0;
    double std_error = 0.0;
    std::vector<int> selected;
};

// The regret reference for one k: offline greedy's value by default, or the
// (1 - 1/e)-scaled exact optimum via brute force.
ReferenceValue compute_reference_value(const Environment& env, int k,
                                       ReferenceMethod method = ReferenceMethod::greedy);

RunSummary summarize_run(const RunTrace& trace, const ReferenceValue& ref, std::uint64_t seed,
                         int rep, double wall_ms);

struct ExperimentResult {
    std::vector<RunSummary> summaries; // deterministic cell order
    std::vector<std::string> errors;   // one line per failed cell
    std::string summary_path;
};

// Executes every (method, k, horizon, rep) cell on a worker pool. Per-run
// seeds derive from (master_seed, method index, k, horizon, rep), so results
// do not depend on scheduling. Writes summary.csv (and per-run trace CSVs,
// errors.log when applicable) under output_dir. Identical config gives
// byte-identical files unless wall-time recording is on.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Shared CSV formatting: 9 significant digits, '.' decimal separator.
std::string format_g9(double v);
std::string summary_csv_header();
std::string summary_csv_row(const RunSummary& s);
void write_trace_csv(const RunTrace& trace, std::ostream& out);

// Salt mixed into the master seed to derive the expected-value oracle stream.
inline constexpr std::uint64_t kOracleSeedSalt = 0x517CC1B727220A95ULL;

} // namespace sgb
