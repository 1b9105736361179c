// hamiltonian.hpp — Jaynes–Cummings–Hubbard operators on excitation-number sectors
//
// All rates are in units of the light–matter coupling g (g == 1 by default). The default
// frame rotates at the cavity frequency, which within a fixed-excitation sector
// only removes a global phase:
//
//   H = Δ Σ_k |e><e|_k + g Σ_k (a_k^† |g><e|_k + h.c.) + A Σ_<k,l> (a_k^† a_l + h.c.)

#pragma once

#include "jch/hilbert.hpp"
#include "jch/operator.hpp"

#include <string>
#include <vector>

namespace jch {

struct ModelParams {
    // The unit of every rate. Only the uncoupled analytic checks set it to 0.
    double g{1.0};
    double hop_A{0.01};
    double detuning{0.0};  // Δ = ω0 - ωd
    double kappa{0.0};
    double gamma{0.0};
    int filling{1};
    double omega_d{1.0e4};  // only enters lab-frame assembly

    void validate() const;
};

enum class Frame { rotating, lab };

SparseOperator build_hamiltonian(const SectorPtr& sector, const ModelParams& params,
                                 Frame frame = Frame::rotating);

// H(Δ) = detuning_free + Δ · atom_number, rotating frame. Used by detuning ramps.
struct HamiltonianParts {
    SparseOperator detuning_free;
    SparseOperator atom_number;
};
HamiltonianParts build_hamiltonian_parts(const SectorPtr& sector, const ModelParams& params);

// Diagonal Σ_k N_k restricted to one site (N_k = a_k^† a_k + |e><e|_k).
SparseOperator build_site_excitation_number(const SectorPtr& sector, int site);

enum class Channel { photon, atom };

struct CollapseOperator {
    Channel channel;
    int site;
    double rate;
    SparseOperator op;  // maps family.sector(m) -> family.sector(m - 1)

    std::string label() const;
};

// sqrt(kappa) a_k and sqrt(gamma) |g><e|_k acting on the sector with `total`
// excitations. Channels with zero rate are omitted, and the total = 0 sector
// has no outgoing jumps.
std::vector<CollapseOperator> build_collapse_operators(const SectorFamily& family, int total,
                                                       const ModelParams& params);

enum class Branch { minus, plus };

// One site's factor of a polariton product state. n == 0 is the cell ground state |g,0>.
struct LocalPolariton {
    int n{0};
    Branch branch{Branch::minus};

    static LocalPolariton ground() { return {0, Branch::minus}; }
    static LocalPolariton lower(int n) { return {n, Branch::minus}; }
    static LocalPolariton upper(int n) { return {n, Branch::plus}; }
};

// Π_k |n_k ±_k> with |n±> = (|g,n> ± |e,n-1>)/√2, embedded in the sector of
// total Σ n_k taken from `family`.
QuantumState polariton_product_state(const SectorFamily& family,
                                     const std::vector<LocalPolariton>& occupations);

// Resonant single-cell polariton level ±g√n (rotating frame). Throws unless Δ == 0.
double polariton_energy(int n, Branch branch, const ModelParams& params);

// Dispersive shift g²(n+1)/δ of the bare levels of a detuned cell.
double dispersive_shift(int n, double delta, double g = 1.0);

// Exact single-cell levels in the {|g,n>, |e,n-1>} block: Δ/2 ± sqrt(Δ²/4 + g² n).
double single_cell_level(int n, Branch branch, double detuning, double g = 1.0);

}  // namespace jch
