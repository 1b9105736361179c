// sim.cpp — Command-line driver: sim <experiment> --config <file> [--threads n] [--seed s] [--out dir]

#include "jch/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <thread>

int main(int argc, char** argv) {
    CLI::App app{"Coupled-cavity polariton simulator"};
    std::string experiment;
    std::string config_path;
    int threads = 1;
    std::uint64_t seed = 0;
    std::string out_dir;
    app.add_option("experiment", experiment, "mott_sweep | blockade | xy_compare | decay_check | oracle_check")
        ->required();
    app.add_option("--config", config_path, "key = value config file")->required()->check(CLI::ExistingFile);
    app.add_option("--threads", threads, "worker threads (0 = hardware concurrency)")->check(CLI::NonNegativeNumber);
    auto* seed_opt = app.add_option("--seed", seed, "override base_seed");
    auto* out_opt = app.add_option("--out", out_dir, "override output_dir");
    CLI11_PARSE(app, argc, argv);

    try {
        const auto kind = jch::experiment_from_string(experiment);
        auto cfg = jch::load_config(config_path);
        if (cfg.experiment != kind)
            throw std::invalid_argument("config declares experiment '" + jch::to_string(cfg.experiment) +
                                        "' but '" + experiment + "' was requested");
        if (*seed_opt) cfg.base_seed = seed;
        if (*out_opt) cfg.output_dir = out_dir;
        if (threads == 0) threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

        const auto result = jch::run_experiment(cfg, threads);
        jch::write_outputs(cfg, result);
        for (const auto& c : result.checks)
            std::printf("%s %s: %.6g %s %.6g  %s\n", c.passed ? "PASS" : "FAIL", c.name.c_str(), c.measured,
                        c.relation.c_str(), c.threshold, c.detail.c_str());
        std::printf("outputs written to %s\n", cfg.output_dir.c_str());
        const bool check_run =
            kind == jch::ExperimentKind::decay_check || kind == jch::ExperimentKind::oracle_check;
        return check_run && !result.passed() ? 1 : 0;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sim: %s\n", e.what());
        return 2;
    }
}
