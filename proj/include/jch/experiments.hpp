// experiments.hpp — Config-driven drivers for the sweep, blockade, XY and check runs

#pragma once

#include "jch/hamiltonian.hpp"
#include "jch/hilbert.hpp"
#include "jch/solvers.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace jch {

enum class ExperimentKind { mott_sweep, blockade, xy_compare, decay_check, oracle_check };

std::string to_string(ExperimentKind k);
ExperimentKind experiment_from_string(const std::string& s);

// Log-spaced detuning grid in units of g.
struct SweepGrid {
    double start{1e-3};
    double end{1e2};
    int points{40};

    void validate() const;
    std::vector<double> values() const;
};

// Every field maps to one `key = value` line of the config file; see
// parse_config for the key names.
struct ExperimentConfig {
    ExperimentKind experiment{ExperimentKind::mott_sweep};
    LatticeSpec lattice{3, Boundary::open, {}};
    std::vector<int> sizes{};  // mott_sweep chain lengths; empty means {lattice.num_sites}
    ModelParams params{};
    SweepGrid sweep{};
    RampSchedule ramp{};  // delta_end is replaced by each grid point
    int trajectories{100};
    std::uint64_t base_seed{20240601};
    std::string output_dir{"out"};
    int dissipative_stride{1};  // dissipative path on every k-th grid point

    double t_max{20.0};  // blockade / xy_compare horizon in units of 1/A
    int t_points{401};
    std::optional<double> blockade_detuning{};  // default 100·A
    bool far_detuned{false};                     // also run the detuned case at 100 g

    std::vector<double> xy_hop_A{0.01, 0.1};
    std::vector<int> up_sites{0};

    double decay_horizon{3.0};  // decay/oracle checks run to decay_horizon / rate
    int check_points{11};

    double tolerance{1e-9};

    void validate() const;
    std::vector<int> chain_sizes() const;
};

// `key = value` lines, `#` comments, blank lines ignored; unknown keys and
// repeated keys are errors.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg);

struct SweepRow {
    double delta_over_g{0.0};
    std::string mode;  // closed | dissipative | dissipative_mixed
    double var_N_mid{0.0};
    double stderr_value{0.0};
    int n_sites{0};
    int filling{0};
};

struct TimeseriesRow {
    double t_times_A{0.0};
    std::string observable_label;
    double value{0.0};
    std::string case_label;
};

struct CheckResult {
    std::string name;
    double measured{0.0};
    double threshold{0.0};
    std::string relation;  // "<", "<=", ">", ">=", "within 0.15 of"
    bool passed{false};
    std::string detail{};
};

struct ExperimentResult {
    ExperimentKind experiment{ExperimentKind::mott_sweep};
    std::vector<SweepRow> sweep;
    std::vector<TimeseriesRow> timeseries;
    std::vector<CheckResult> checks;
    nlohmann::ordered_json diagnostics = nlohmann::ordered_json::object();
    nlohmann::ordered_json runtimes = nlohmann::ordered_json::object();

    bool passed() const;
};

// Runs f(0..n-1) on up to `threads` workers. Each index is handled exactly
// once; callers write results into per-index slots.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& f);

ExperimentResult run_mott_sweep(const ExperimentConfig& cfg, int threads = 1);
ExperimentResult run_blockade(const ExperimentConfig& cfg, int threads = 1);
ExperimentResult run_xy_compare(const ExperimentConfig& cfg, int threads = 1);
ExperimentResult run_decay_check(const ExperimentConfig& cfg, int threads = 1);
ExperimentResult run_oracle_check(const ExperimentConfig& cfg, int threads = 1);
ExperimentResult run_experiment(const ExperimentConfig& cfg, int threads = 1);

// 17 significant digits.
std::string format_double(double x);

// sweep.csv / timeseries.csv (when non-empty), summary.json and runtimes.json
// in cfg.output_dir. Everything except runtimes.json is a pure function of
// the config.
void write_outputs(const ExperimentConfig& cfg, const ExperimentResult& result);
nlohmann::ordered_json summary_json(const ExperimentConfig& cfg, const ExperimentResult& result);

}  // namespace jch
