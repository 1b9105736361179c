// xy.cpp — Spin sectors, XY Hamiltonian assembly, and polariton-to-spin projection

#include "jch/xy.hpp"

#include "jch/observables.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

namespace jch::xy {

SpinSector::SpinSector(int num_spins, int num_up) : num_spins_(num_spins), num_up_(num_up) {
    if (num_spins < 1 || num_spins > 62) throw std::invalid_argument("SpinSector: bad num_spins");
    if (num_up < 0 || num_up > num_spins) throw std::invalid_argument("SpinSector: bad num_up");
    const std::uint64_t limit = std::uint64_t{1} << num_spins;
    for (std::uint64_t s = 0; s < limit; ++s) {
        if (std::popcount(s) == num_up) {
            index_.emplace(s, states_.size());
            states_.push_back(s);
        }
    }
}

std::optional<std::size_t> SpinSector::index_of(std::uint64_t mask) const {
    const auto it = index_.find(mask);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

SpinChainState spin_basis_state(const SpinSectorPtr& sector, std::uint64_t mask) {
    const auto i = sector->index_of(mask);
    if (!i) throw std::invalid_argument("spin_basis_state: mask not in sector");
    SpinChainState s{sector, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sector->dimension()))};
    s.amplitudes[static_cast<Eigen::Index>(*i)] = 1.0;
    return s;
}

SparseOperator build_xy_hamiltonian(const SpinSectorPtr& sector, double coupling, Boundary boundary) {
    const int n = sector->num_spins();
    if (n < 2) throw std::invalid_argument("build_xy_hamiltonian: need at least two spins");
    LatticeSpec lattice{n, boundary, {}};
    const auto bonds = lattice.bonds();
    std::vector<Eigen::Triplet<cplx>> trips;
    for (std::size_t i = 0; i < sector->dimension(); ++i) {
        const auto s = sector->state(i);
        for (const auto& [k, l] : bonds) {
            const bool up_k = (s >> k) & 1U;
            const bool up_l = (s >> l) & 1U;
            if (up_k == up_l) continue;
            const std::uint64_t flipped = s ^ (std::uint64_t{1} << k) ^ (std::uint64_t{1} << l);
            const auto j = sector->index_of(flipped);
            if (*j > i) {
                trips.emplace_back(static_cast<int>(*j), static_cast<int>(i), coupling);
                trips.emplace_back(static_cast<int>(i), static_cast<int>(*j), coupling);
            }
        }
    }
    return from_triplets(sector->dimension(), sector->dimension(), trips, true);
}

SparseOperator build_xy_hamiltonian(int num_spins, double coupling, Boundary boundary, int num_up) {
    return build_xy_hamiltonian(std::make_shared<const SpinSector>(num_spins, num_up), coupling,
                                boundary);
}

double effective_coupling(const ModelParams& params) {
    return 0.5 * params.hop_A;
}

SpinProjection map_polariton_to_spin(const QuantumState& state) {
    if (!state.sector) throw std::invalid_argument("map_polariton_to_spin: state has no sector");
    const auto& sector = *state.sector;
    const int n = sector.num_sites();
    auto spins = std::make_shared<const SpinSector>(n, sector.total_excitations());
    Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(spins->dimension()));
    const double r = std::sqrt(0.5);
    for (std::size_t i = 0; i < sector.dimension(); ++i) {
        const auto cfg = sector.config(i);
        std::uint64_t mask = 0;
        double factor = 1.0;
        bool inside = true;
        for (int k = 0; k < n && inside; ++k) {
            const auto sc = cfg[static_cast<std::size_t>(k)];
            if (sc.excitations() == 0) continue;
            if (sc.excitations() > 1) {
                inside = false;
                break;
            }
            // <1-|g,1> = 1/√2, <1-|e,0> = -1/√2
            factor *= sc.atom_excited ? -r : r;
            mask |= std::uint64_t{1} << k;
        }
        if (!inside) continue;
        const auto j = spins->index_of(mask);
        amps[static_cast<Eigen::Index>(*j)] += factor * state.amplitudes[static_cast<Eigen::Index>(i)];
    }
    const double total = state.amplitudes.squaredNorm();
    const double kept = amps.squaredNorm();
    SpinProjection out;
    out.leakage = std::max(0.0, 1.0 - kept / total);
    if (kept > 0.0) amps /= std::sqrt(kept);
    out.state = SpinChainState{spins, std::move(amps)};
    return out;
}

ComparisonSeries compare_models(int num_sites, const ModelParams& params,
                                const std::vector<int>& up_sites, const std::vector<double>& t_grid,
                                Boundary boundary, const EvolveOptions& opts) {
    if (num_sites < 2) throw std::invalid_argument("compare_models: need at least two sites");
    std::vector<LocalPolariton> occ(static_cast<std::size_t>(num_sites), LocalPolariton::ground());
    std::uint64_t mask = 0;
    for (const int k : up_sites) {
        if (k < 0 || k >= num_sites) throw std::out_of_range("compare_models: site out of range");
        if (mask & (std::uint64_t{1} << k)) throw std::invalid_argument("compare_models: repeated site");
        occ[static_cast<std::size_t>(k)] = LocalPolariton::lower(1);
        mask |= std::uint64_t{1} << k;
    }
    const int m = static_cast<int>(up_sites.size());
    const SectorFamily family(LatticeSpec{num_sites, boundary, {}}, m);
    const auto psi0 = polariton_product_state(family, occ);
    const auto H_full = TimeDependentOperator::constant(build_hamiltonian(psi0.sector, params));

    auto spins = std::make_shared<const SpinSector>(num_sites, m);
    const auto spin0 = spin_basis_state(spins, mask);
    const auto H_xy = TimeDependentOperator::constant(
        build_xy_hamiltonian(spins, effective_coupling(params), boundary));

    const auto full = evolve(H_full, psi0.amplitudes, t_grid, opts);
    const auto spin = evolve(H_xy, spin0.amplitudes, t_grid, opts);

    ComparisonSeries out;
    out.times = t_grid;
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        const auto proj = map_polariton_to_spin(QuantumState{psi0.sector, full[i]});
        // Global phase (polariton self-energy -g per excitation) drops out of |<.|.>|^2.
        const cplx overlap = spin[i].dot(proj.state.amplitudes);
        out.fidelity.push_back(std::norm(overlap));
        out.leakage.push_back(proj.leakage);
    }
    return out;
}

}  // namespace jch::xy
