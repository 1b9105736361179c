// xy.hpp — Hard-core polariton (XY spin chain) model and its comparison with
// the full cavity array.
//
// Spin up at site k <-> one lower polariton |1-> in cavity k; spin down <-> |g,0>.
// Projecting A (a_k^† a_l + h.c.) onto the lower-polariton manifold gives the
// spin coupling J (σ+_k σ-_l + h.c.) with J = A |<1-|a^†|g,0>|^2 = A / 2.

#pragma once

#include "jch/hamiltonian.hpp"
#include "jch/hilbert.hpp"
#include "jch/operator.hpp"
#include "jch/solvers.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace jch::xy {

// Fixed-magnetization basis: bitmasks with `num_up` set bits (bit k = site k), ascending.
class SpinSector {
public:
    SpinSector(int num_spins, int num_up);

    int num_spins() const noexcept { return num_spins_; }
    int num_up() const noexcept { return num_up_; }
    std::size_t dimension() const noexcept { return states_.size(); }
    std::uint64_t state(std::size_t i) const { return states_.at(i); }
    std::optional<std::size_t> index_of(std::uint64_t mask) const;

private:
    int num_spins_;
    int num_up_;
    std::vector<std::uint64_t> states_;
    std::unordered_map<std::uint64_t, std::size_t> index_;
};

using SpinSectorPtr = std::shared_ptr<const SpinSector>;

struct SpinChainState {
    SpinSectorPtr sector;
    Eigen::VectorXcd amplitudes;
};

SpinChainState spin_basis_state(const SpinSectorPtr& sector, std::uint64_t mask);

// J Σ_<k,l> (σ+_k σ-_l + h.c.) on the sector of `num_up` up spins.
SparseOperator build_xy_hamiltonian(const SpinSectorPtr& sector, double coupling, Boundary boundary);
SparseOperator build_xy_hamiltonian(int num_spins, double coupling, Boundary boundary, int num_up = 1);

double effective_coupling(const ModelParams& params);

struct SpinProjection {
    SpinChainState state;  // normalized (zero vector when nothing survives)
    double leakage{0.0};   // 1 - |projection|^2
};

// Projects every site onto span{|g,0>, |1->}.
SpinProjection map_polariton_to_spin(const QuantumState& state);

struct ComparisonSeries {
    std::vector<double> times;
    std::vector<double> fidelity;
    std::vector<double> leakage;
};

// Evolves the full model from Π|1->_k (k in up_sites, ground elsewhere) and the
// XY chain from the matching spin configuration; compares them on t_grid.
ComparisonSeries compare_models(int num_sites, const ModelParams& params,
                                const std::vector<int>& up_sites, const std::vector<double>& t_grid,
                                Boundary boundary = Boundary::open, const EvolveOptions& opts = {});

}  // namespace jch::xy
