// observables.hpp — Local excitation moments, polariton populations, fidelities

#pragma once

#include "jch/hamiltonian.hpp"
#include "jch/operator.hpp"
#include "jch/solvers.hpp"

#include <string>
#include <vector>

namespace jch {

struct ObservableResult {
    std::string label;
    double value{0.0};
    bool variance_flag{false};
};

struct Moments {
    double mean{0.0};
    double variance{0.0};
};

// <N_k> and <N_k^2> - <N_k>^2 for N_k = a_k^† a_k + |e><e|_k (diagonal in the sector basis).
Moments excitation_moments(const QuantumState& state, int site);

// <P> for P = |n±><n±|_k ⊗ 1. n may reach cutoff + 1, where only the |e,n-1>
// component of the polariton lies inside the truncated space.
double polariton_population(const QuantumState& state, int site, int n, Branch branch);

// Probability of the local ground state |g,0>_k.
double ground_population(const QuantumState& state, int site);

// |<a|b>|^2; the states must live on the same sector.
double fidelity(const QuantumState& a, const QuantumState& b);

// Default probe site: the middle cavity ⌈N/2⌉ in 1-based counting.
int middle_site(int num_sites);

// Two estimators of var(N_k) over a trajectory ensemble.
struct EnsembleVariance {
    double trajectory_mean{0.0};    // mean over trajectories of each trajectory's variance
    double trajectory_stderr{0.0};
    double mixed_state{0.0};        // E[<N^2>] - E[<N>]^2 of the ensemble density matrix
};
EnsembleVariance ensemble_excitation_variance(const std::vector<QuantumState>& samples, int site);

}  // namespace jch
