// acceptance.cpp — Runs every primary acceptance criterion and prints one PASS/FAIL line each
//
// Usage: acceptance [criterion ...]   (no arguments runs all of them)

#include "jch/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <thread>
#include <vector>

using namespace jch;

namespace {

struct Criterion {
    std::string name;
    std::function<std::vector<CheckResult>()> run;
};

int worker_count() { return static_cast<int>(std::max(1u, std::thread::hardware_concurrency())); }

std::vector<CheckResult> select(const ExperimentResult& r, const std::vector<std::string>& prefixes) {
    std::vector<CheckResult> out;
    for (const auto& c : r.checks)
        for (const auto& p : prefixes)
            if (c.name.rfind(p, 0) == 0) {
                out.push_back(c);
                break;
            }
    return out;
}

// One closed N = 3, 5, 7 sweep feeds three criteria.
const ExperimentResult& closed_sweep() {
    static const ExperimentResult result = [] {
        auto cfg = parse_config(
            "experiment = mott_sweep\nsizes = 3, 5, 7\nhop_A = 0.01\n"
            "sweep_start = 0.001\nsweep_end = 100\nsweep_points = 40\n");
        return run_mott_sweep(cfg, worker_count());
    }();
    return result;
}

std::vector<Criterion> criteria() {
    return {
        {"mott_plateau", [] { return select(closed_sweep(), {"mott_plateau_"}); }},
        {"superfluid_value", [] { return select(closed_sweep(), {"superfluid_value_"}); }},
        {"sharpening_with_N", [] { return select(closed_sweep(), {"sharpening_with_N"}); }},
        {"blockade",
         [] {
             auto cfg = parse_config("experiment = blockade\nnum_sites = 3\nhop_A = 0.01\nt_max = 20\nt_points = 401\n");
             return select(run_blockade(cfg, worker_count()),
                           {"resonant_double_occupation", "contrast_detuned"});
         }},
        {"xy_equivalence",
         [] {
             auto cfg = parse_config(
                 "experiment = xy_compare\nnum_sites = 3\nxy_hop_A = 0.01\nup_sites = 0\nt_max = 10\nt_points = 401\n");
             return run_xy_compare(cfg, worker_count()).checks;
         }},
        {"oracle_equivalence",
         [] {
             auto cfg = parse_config(
                 "experiment = oracle_check\nhop_A = 0.01\ndetuning = 0.37\nkappa = 0.001\ngamma = 0.001\n"
                 "trajectories = 2000\ncheck_points = 11\nbase_seed = 7\n");
             return select(run_oracle_check(cfg, worker_count()),
                           {"sector_vs_dense_eigenvalues_", "trajectories_vs_lindblad"});
         }},
        {"analytic_dynamics",
         [] {
             auto cfg = parse_config(
                 "experiment = decay_check\nhop_A = 0.01\nkappa = 0.001\ngamma = 0.001\n"
                 "trajectories = 1000\ncheck_points = 11\nbase_seed = 11\n");
             return select(run_decay_check(cfg, worker_count()), {"rabi_oscillation", "photon_hopping",
                                                                  "cavity_decay"});
         }},
        {"dissipative_contrast",
         [] {
             auto cfg = parse_config(
                 "experiment = mott_sweep\nnum_sites = 3\nhop_A = 0.01\nkappa = 0.001\ngamma = 0.001\n"
                 "sweep_start = 0.001\nsweep_end = 100\nsweep_points = 40\ndissipative_stride = 39\n"
                 "ramp_start = 0.001\nramp_duration = 10\nramp_shape = smooth_step\ntrajectories = 100\n");
             return select(run_mott_sweep(cfg, worker_count()), {"dissipative_contrast_"});
         }},
    };
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> only(argv + 1, argv + argc);
    int failed = 0;
    int ran = 0;
    for (const auto& c : criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) continue;
        ++ran;
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<CheckResult> checks;
        std::string error;
        try {
            checks = c.run();
            if (checks.empty()) error = "no checks produced";
        } catch (const std::exception& e) {
            error = e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        bool ok = error.empty();
        std::string detail;
        for (const auto& k : checks) {
            ok = ok && k.passed;
            char buf[256];
            std::snprintf(buf, sizeof buf, "%s%s=%.6g (%s %.6g)", detail.empty() ? "" : "; ",
                          k.name.c_str(), k.measured, k.relation.c_str(), k.threshold);
            detail += buf;
            if (!k.passed) detail += " FAILED";
        }
        if (!error.empty()) detail += (detail.empty() ? "" : "; ") + ("error: " + error);
        std::printf("%s %s [%.1f s]: %s\n", ok ? "PASS" : "FAIL", c.name.c_str(), secs, detail.c_str());
        std::fflush(stdout);
        failed += ok ? 0 : 1;
    }
    if (ran == 0) {
        std::fprintf(stderr, "acceptance: no criterion matched\n");
        return 2;
    }
    std::printf("%d of %d criteria passed\n", ran - failed, ran);
    return failed == 0 ? 0 : 1;
}
