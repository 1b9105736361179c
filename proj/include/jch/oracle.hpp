// oracle.hpp — Brute-force references over the unrestricted product basis.
//
// Product basis: site 0 is the most significant digit, each site contributes
// the local digit 2n + e (n photons, e = 1 for an excited atom). Restricting
// to a fixed total excitation number therefore reproduces the canonical
// sector order. Exponential cost; meant for tests and diagnostics only.

#pragma once

#include "jch/hamiltonian.hpp"
#include "jch/hilbert.hpp"
#include "jch/operator.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace jch::oracle {

inline constexpr std::size_t max_dense_dimension = 4096;
inline constexpr std::size_t max_lindblad_dimension = 64;

struct DenseOperator {
    LatticeSpec lattice;
    int photon_cutoff{0};
    Eigen::MatrixXcd matrix;

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(matrix.rows()); }
};

// (2(n_max+1))^N; requires an explicit photon cutoff on the lattice.
std::size_t product_dimension(const LatticeSpec& lattice);
std::vector<SiteConfig> product_config(const LatticeSpec& lattice, std::size_t index);
int product_excitations(const LatticeSpec& lattice, std::size_t index);

DenseOperator dense_hamiltonian(const LatticeSpec& lattice, const ModelParams& params,
                                Frame frame = Frame::rotating);

// √κ a_k and √γ σ_k^- on the full product space (zero-rate channels omitted).
std::vector<Eigen::MatrixXcd> dense_collapse_operators(const LatticeSpec& lattice,
                                                       const ModelParams& params);

// Product indices with the given total excitation number, ascending.
std::vector<std::size_t> block_indices(const LatticeSpec& lattice, int total);
Eigen::MatrixXcd block(const DenseOperator& H, int total);
Eigen::VectorXd block_eigenvalues(const DenseOperator& H, int total);
// Largest |H_ij| between different total-excitation subspaces.
double off_block_max(const DenseOperator& H);

// Sector state -> product-space vector; the sector must use the lattice's cutoff.
Eigen::VectorXcd embed(const QuantumState& state, const LatticeSpec& lattice);

// dρ/dt = -i[H,ρ] + Σ_j (C_j ρ C_j^† - ½{C_j^† C_j, ρ}), rotating frame, with
// ρ re-symmetrized at every grid time. Returns ρ(t) for each t in t_grid.
std::vector<Eigen::MatrixXcd> dense_lindblad_propagate(const LatticeSpec& lattice,
                                                       const ModelParams& params,
                                                       const Eigen::MatrixXcd& rho0,
                                                       const std::vector<double>& t_grid,
                                                       double tolerance = 1e-13);

}  // namespace jch::oracle
