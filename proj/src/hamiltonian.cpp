// hamiltonian.cpp — Sector-restricted assembly of the coupled-cavity Hamiltonian

#include "jch/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace jch {

void ModelParams::validate() const {
    if (g < 0.0) throw std::invalid_argument("ModelParams: g must be >= 0");
    if (!(hop_A > 0.0)) throw std::invalid_argument("ModelParams: hop_A must be > 0");
    if (kappa < 0.0) throw std::invalid_argument("ModelParams: kappa must be >= 0");
    if (gamma < 0.0) throw std::invalid_argument("ModelParams: gamma must be >= 0");
    if (filling < 0) throw std::invalid_argument("ModelParams: filling must be >= 0");
}

namespace {

using Triplets = std::vector<Eigen::Triplet<cplx>>;

struct Assembly {
    double diag_photon;  // coefficient of Σ n_k
    double diag_atom;    // coefficient of Σ e_k
    double coupling;
    double hopping;
};

// Off-diagonal terms H|i> = Σ_j v_j |j> are emitted once per unordered pair
// (only for j > i) together with their mirror, so the result is symmetric bit for bit.
SparseOperator assemble(const SectorPtr& sector, const Assembly& a) {
    if (!sector || sector->dimension() == 0)
        throw std::invalid_argument("build_hamiltonian: empty sector");
    const auto& lattice = sector->lattice();
    const int cutoff = sector->photon_cutoff();
    const auto bonds = lattice.bonds();
    const std::size_t dim = sector->dimension();

    Triplets trips;
    trips.reserve(dim * (1 + 2 * (lattice.num_sites + bonds.size())));
    std::vector<SiteConfig> work(static_cast<std::size_t>(lattice.num_sites));

    auto emit = [&](std::size_t i, double value) {
        const auto j = sector->index_of(work);
        if (!j) throw std::logic_error("build_hamiltonian: target configuration outside sector");
        if (*j > i) {
            trips.emplace_back(static_cast<int>(*j), static_cast<int>(i), value);
            trips.emplace_back(static_cast<int>(i), static_cast<int>(*j), value);
        }
    };

    for (std::size_t i = 0; i < dim; ++i) {
        const auto cfg = sector->config(i);
        double diag = 0.0;
        for (const auto& sc : cfg) {
            diag += a.diag_photon * sc.photon_number + (sc.atom_excited ? a.diag_atom : 0.0);
        }
        if (diag != 0.0) trips.emplace_back(static_cast<int>(i), static_cast<int>(i), diag);

        // g (a_k^† σ_k^- + h.c.): only the |e,n> -> |g,n+1> direction; the mirror gives h.c.
        if (a.coupling != 0.0) {
            for (int k = 0; k < lattice.num_sites; ++k) {
                const auto sc = cfg[static_cast<std::size_t>(k)];
                if (!sc.atom_excited || sc.photon_number + 1 > cutoff) continue;
                std::copy(cfg.begin(), cfg.end(), work.begin());
                work[static_cast<std::size_t>(k)] = SiteConfig{sc.photon_number + 1, false};
                emit(i, a.coupling * std::sqrt(static_cast<double>(sc.photon_number + 1)));
            }
        }
        if (a.hopping != 0.0) {
            for (const auto& [k, l] : bonds) {
                for (const auto& [to, from] : {std::pair{k, l}, std::pair{l, k}}) {
                    const auto src = cfg[static_cast<std::size_t>(from)];
                    const auto dst = cfg[static_cast<std::size_t>(to)];
                    if (src.photon_number == 0 || dst.photon_number + 1 > cutoff) continue;
                    std::copy(cfg.begin(), cfg.end(), work.begin());
                    work[static_cast<std::size_t>(from)].photon_number -= 1;
                    work[static_cast<std::size_t>(to)].photon_number += 1;
                    emit(i, a.hopping * std::sqrt(static_cast<double>(src.photon_number) *
                                                  (dst.photon_number + 1)));
                }
            }
        }
    }
    auto op = from_triplets(dim, dim, trips, true);
    op.domain = sector;
    op.codomain = sector;
    return op;
}

}  // namespace

SparseOperator build_hamiltonian(const SectorPtr& sector, const ModelParams& params, Frame frame) {
    params.validate();
    Assembly a{0.0, params.detuning, params.g, params.hop_A};
    if (frame == Frame::lab) {
        a.diag_photon = params.omega_d;
        a.diag_atom = params.omega_d + params.detuning;
    }
    return assemble(sector, a);
}

HamiltonianParts build_hamiltonian_parts(const SectorPtr& sector, const ModelParams& params) {
    params.validate();
    return {assemble(sector, {0.0, 0.0, params.g, params.hop_A}),
            assemble(sector, {0.0, 1.0, 0.0, 0.0})};
}

SparseOperator build_site_excitation_number(const SectorPtr& sector, int site) {
    if (!sector) throw std::invalid_argument("build_site_excitation_number: null sector");
    const std::size_t dim = sector->dimension();
    Triplets trips;
    for (std::size_t i = 0; i < dim; ++i) {
        const int n = sector->local_occupation(i, site).excitations();
        if (n != 0) trips.emplace_back(static_cast<int>(i), static_cast<int>(i), double(n));
    }
    auto op = from_triplets(dim, dim, trips, true);
    op.domain = sector;
    op.codomain = sector;
    return op;
}

std::string CollapseOperator::label() const {
    return std::string(channel == Channel::photon ? "cavity" : "atom") + "[" +
           std::to_string(site) + "]";
}

std::vector<CollapseOperator> build_collapse_operators(const SectorFamily& family, int total,
                                                       const ModelParams& params) {
    if (params.kappa < 0.0 || params.gamma < 0.0)
        throw std::invalid_argument("build_collapse_operators: negative decay rate");
    std::vector<CollapseOperator> out;
    if (total == 0) return out;
    const auto source = family.sector(total);
    const auto target = family.sector(total - 1);
    const int n_sites = source->num_sites();
    const std::size_t dim = source->dimension();
    std::vector<SiteConfig> work(static_cast<std::size_t>(n_sites));

    for (const Channel ch : {Channel::photon, Channel::atom}) {
        const double rate = ch == Channel::photon ? params.kappa : params.gamma;
        if (rate == 0.0) continue;
        const double amp = std::sqrt(rate);
        for (int k = 0; k < n_sites; ++k) {
            Triplets trips;
            for (std::size_t i = 0; i < dim; ++i) {
                const auto cfg = source->config(i);
                const auto sc = cfg[static_cast<std::size_t>(k)];
                double value = 0.0;
                std::copy(cfg.begin(), cfg.end(), work.begin());
                if (ch == Channel::photon) {
                    if (sc.photon_number == 0) continue;
                    work[static_cast<std::size_t>(k)].photon_number -= 1;
                    value = amp * std::sqrt(static_cast<double>(sc.photon_number));
                } else {
                    if (!sc.atom_excited) continue;
                    work[static_cast<std::size_t>(k)].atom_excited = false;
                    value = amp;
                }
                const auto j = target->index_of(work);
                if (!j) throw std::logic_error("build_collapse_operators: target outside sector");
                trips.emplace_back(static_cast<int>(*j), static_cast<int>(i), value);
            }
            auto op = from_triplets(target->dimension(), dim, trips, false);
            op.domain = source;
            op.codomain = target;
            out.push_back(CollapseOperator{ch, k, rate, std::move(op)});
        }
    }
    return out;
}

QuantumState polariton_product_state(const SectorFamily& family,
                                     const std::vector<LocalPolariton>& occupations) {
    const int n_sites = family.lattice().num_sites;
    if (static_cast<int>(occupations.size()) != n_sites)
        throw std::invalid_argument("polariton_product_state: need one occupation per site");
    int total = 0;
    for (const auto& o : occupations) {
        if (o.n < 0) throw std::invalid_argument("polariton_product_state: negative occupation");
        total += o.n;
    }
    const auto sector = family.sector(total);
    for (const auto& o : occupations) {
        if (o.n > sector->photon_cutoff())
            throw std::invalid_argument("polariton_product_state: occupation " +
                                        std::to_string(o.n) + " exceeds photon cutoff");
    }

    QuantumState state{sector, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sector->dimension()))};
    std::vector<SiteConfig> work(static_cast<std::size_t>(n_sites));
    // Each excited site contributes |g,n> (weight 1/√2) and |e,n-1> (weight ±1/√2).
    std::vector<int> excited;
    for (int k = 0; k < n_sites; ++k)
        if (occupations[static_cast<std::size_t>(k)].n > 0) excited.push_back(k);
    const std::size_t combos = std::size_t{1} << excited.size();
    const double weight = std::pow(std::sqrt(0.5), static_cast<double>(excited.size()));
    for (std::size_t mask = 0; mask < combos; ++mask) {
        double sign = 1.0;
        for (int k = 0; k < n_sites; ++k) work[static_cast<std::size_t>(k)] = SiteConfig{0, false};
        for (std::size_t b = 0; b < excited.size(); ++b) {
            const int k = excited[b];
            const auto& o = occupations[static_cast<std::size_t>(k)];
            if (mask & (std::size_t{1} << b)) {
                work[static_cast<std::size_t>(k)] = SiteConfig{o.n - 1, true};
                if (o.branch == Branch::minus) sign = -sign;
            } else {
                work[static_cast<std::size_t>(k)] = SiteConfig{o.n, false};
            }
        }
        const auto idx = sector->index_of(work);
        if (!idx) throw std::logic_error("polariton_product_state: component outside sector");
        state.amplitudes[static_cast<Eigen::Index>(*idx)] = sign * weight;
    }
    return state;
}

double polariton_energy(int n, Branch branch, const ModelParams& params) {
    if (n < 1) throw std::invalid_argument("polariton_energy: n must be >= 1");
    if (params.detuning != 0.0)
        throw std::invalid_argument("polariton_energy: closed form holds only at zero detuning");
    const double e = params.g * std::sqrt(static_cast<double>(n));
    return branch == Branch::plus ? e : -e;
}

double dispersive_shift(int n, double delta, double g) {
    if (delta == 0.0) throw std::invalid_argument("dispersive_shift: delta must be nonzero");
    return g * g * (n + 1) / delta;
}

double single_cell_level(int n, Branch branch, double detuning, double g) {
    if (n < 1) throw std::invalid_argument("single_cell_level: n must be >= 1");
    const double r = std::sqrt(0.25 * detuning * detuning + g * g * n);
    return 0.5 * detuning + (branch == Branch::plus ? r : -r);
}

}  // namespace jch
