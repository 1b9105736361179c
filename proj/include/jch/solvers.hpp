// solvers.hpp — Ground states, unitary/non-Hermitian propagation, detuning ramps,
// and quantum-jump trajectories.

#pragma once

#include "jch/hamiltonian.hpp"
#include "jch/hilbert.hpp"
#include "jch/operator.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace jch {

// ---------------------------------------------------------------- eigensolvers

struct GroundStateOptions {
    std::size_t dense_threshold{512};
    double tolerance{1e-10};  // absolute residual ||Hv - Ev||
    int krylov_dim{120};
    int keep{40};             // Ritz vectors retained across thick restarts
    int max_restarts{2000};
    std::optional<Eigen::VectorXcd> initial_guess{};
};

struct Eigenpair {
    double energy{0.0};
    Eigen::VectorXcd vector{};
    double residual{0.0};
    int matvecs{0};
};

// Dense for dimension <= dense_threshold, thick-restart Lanczos otherwise.
Eigenpair ground_state(const SparseOperator& H, const GroundStateOptions& opts = {});
QuantumState ground_state_of(const SparseOperator& H, const GroundStateOptions& opts = {});

Eigenpair dense_ground_state(const SparseOperator& H);
Eigenpair lanczos_ground_state(const SparseOperator& H, const GroundStateOptions& opts = {});

// Sector ground energy for each photon cutoff; a reduced cutoff is trustworthy
// once the energies stop moving.
std::vector<double> cutoff_convergence(const LatticeSpec& lattice, int total,
                                       const ModelParams& params, const std::vector<int>& cutoffs);

// ------------------------------------------------------------- time evolution

// H(t) = Σ_j c_j(t) O_j. An empty coefficient means c_j == 1. Operators may be
// non-Hermitian (the trajectory drift carries -i/2 Σ C^†C).
struct TimeDependentOperator {
    struct Term {
        SparseOperator op;
        std::function<double(double)> coefficient{};
    };
    std::vector<Term> terms;

    static TimeDependentOperator constant(SparseOperator op);

    std::size_t dimension() const;
    bool time_independent() const;
    // y = Σ_j w_j O_j x with weights w_j = Σ_s alpha_s c_j(t_s).
    Eigen::VectorXcd apply_combination(const Eigen::VectorXcd& x,
                                       const std::vector<double>& coefficient_weights) const;
    std::vector<double> coefficients(double t) const;
};

struct EvolveOptions {
    double tolerance{1e-9};  // local error per unit time
    int krylov_dim{30};
    double initial_step{0.05};
    double max_step{1.0e3};
    long long max_steps{50'000'000};
    // Constant Hermitian generators up to this dimension are propagated exactly
    // through their eigendecomposition (0 disables).
    std::size_t spectral_threshold{512};
};

// Weights of the two exponentials of a fourth-order commutator-free Magnus step
// over [t, t + h]; each exponential then runs for h / 2.
struct Cfm4Weights {
    std::vector<double> first;
    std::vector<double> second;
};
Cfm4Weights cfm4_weights(const TimeDependentOperator& H, double t, double h);

struct EvolveStats {
    long long steps{0};
    long long rejected{0};
    long long matvecs{0};
};

// exp(-i t M) v via an Arnoldi basis, substepping until the a posteriori error
// estimate is below tolerance * (substep length).
Eigen::VectorXcd krylov_expmv(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                              const Eigen::VectorXcd& v, double t, double tolerance,
                              int krylov_dim, long long* matvecs = nullptr);

// Fourth-order commutator-free Magnus stepping with step-doubling error control.
class MagnusPropagator {
public:
    MagnusPropagator(const TimeDependentOperator& H, EvolveOptions opts);

    // One CFM4 step of length h from time t.
    Eigen::VectorXcd step(const Eigen::VectorXcd& psi, double t, double h);

    // Advances psi from t0 to t1 adaptively. on_step(t_prev, psi_prev, t, psi)
    // returns false to stop early (psi then holds the state at the returned time).
    double advance(Eigen::VectorXcd& psi, double t0, double t1,
                   const std::function<bool(double, const Eigen::VectorXcd&, double,
                                            const Eigen::VectorXcd&)>& on_step = {});

    const EvolveStats& stats() const noexcept { return stats_; }
    const TimeDependentOperator& hamiltonian() const noexcept { return H_; }
    const EvolveOptions& options() const noexcept { return opts_; }

private:
    Eigen::VectorXcd exp_combination(const Eigen::VectorXcd& psi, double h,
                                     const std::vector<double>& weights, double tolerance);

    const TimeDependentOperator& H_;
    EvolveOptions opts_;
    double h_{0.0};
    EvolveStats stats_{};
};

// Solves i d|psi>/dt = H(t)|psi> from t = 0; returns the state at each output time.
std::vector<Eigen::VectorXcd> evolve(const TimeDependentOperator& H, const Eigen::VectorXcd& psi0,
                                     const std::vector<double>& output_times,
                                     const EvolveOptions& opts = {}, EvolveStats* stats = nullptr);
std::vector<QuantumState> evolve(const TimeDependentOperator& H, const QuantumState& state0,
                                 const std::vector<double>& output_times,
                                 const EvolveOptions& opts = {});

// --------------------------------------------------------------- detuning ramps

enum class RampShape { linear_in_log, smooth_step };

std::string to_string(RampShape s);
RampShape ramp_shape_from_string(const std::string& s);

struct RampSchedule {
    double delta_start{1e-3};
    double delta_end{1e2};
    double duration{10.0};  // in units of 1/A
    RampShape shape{RampShape::smooth_step};
    // Non-positive endpoints are replaced by this floor for log interpolation.
    static constexpr double log_floor = 1e-3;

    void validate() const;
    double physical_duration(double hop_A) const { return duration / hop_A; }
    // Detuning as a function of physical time t in [0, duration / hop_A].
    std::function<double(double)> profile(double hop_A) const;
};

// H(Δ(t)) in one sector, built from the Δ-independent part plus Δ(t)·Σ|e><e|.
TimeDependentOperator ramp_hamiltonian(const SectorPtr& sector, const ModelParams& params,
                                       std::function<double(double)> detuning);

struct RampResult {
    QuantumState state;
    double ground_overlap{0.0};  // |<ground(delta_end)|state>|^2
    double final_detuning{0.0};
};

RampResult adiabatic_ramp(const SectorPtr& sector, const ModelParams& params,
                          const RampSchedule& schedule, const QuantumState& state0,
                          const EvolveOptions& opts = {});

// ---------------------------------------------------------- quantum trajectories

// Dense propagators of a small sector's drift, tabulated once on an adaptive
// grid that contains the output times and shared by every trajectory.
class StepTable;

// Per-sector generators for the jump unraveling. Index m holds the drift
// H_m(t) - (i/2) Σ_j C_j^† C_j and the collapse operators leaving sector m.
struct OpenSystem {
    std::vector<SectorPtr> sectors;
    std::vector<TimeDependentOperator> hamiltonians;
    std::vector<TimeDependentOperator> drifts;
    std::vector<std::vector<CollapseOperator>> collapse;
    std::vector<std::shared_ptr<const StepTable>> tables;  // optional, per sector
};

// `detuning` overrides params.detuning with a time profile when provided.
OpenSystem make_open_system(const SectorFamily& family, const ModelParams& params,
                            std::function<double(double)> detuning = {});

// Builds step tables for every sector up to `max_dimension`. Worth it when many
// trajectories share the system; larger sectors keep the Krylov path.
void tabulate_drifts(OpenSystem& system, const std::vector<double>& output_times,
                     const EvolveOptions& opts = {}, std::size_t max_dimension = 64);

struct JumpEvent {
    double time{0.0};
    int channel{0};  // index into OpenSystem::collapse[sector]
    int from_total{0};
    std::string label;
};

struct TrajectoryRecord {
    std::uint64_t seed{0};
    std::vector<JumpEvent> jumps;
    std::vector<double> times;
    std::vector<QuantumState> samples;
};

struct TrajectoryOptions {
    EvolveOptions evolve{};
    double jump_time_tolerance{1e-10};
};

// Counter-based per-trajectory seed; ensembles parallelize deterministically.
std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t index);

TrajectoryRecord quantum_trajectory(const OpenSystem& system, const QuantumState& state0,
                                    const std::vector<double>& output_times, std::uint64_t seed,
                                    const TrajectoryOptions& opts = {});

struct EnsembleSeries {
    std::vector<double> mean;
    std::vector<double> std_error;
};

EnsembleSeries ensemble_average(const std::vector<TrajectoryRecord>& records,
                                const std::function<double(const QuantumState&)>& observable);

}  // namespace jch
