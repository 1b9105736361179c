// oracle.cpp — Dense product-space Hamiltonian and Lindblad propagation

#include "jch/oracle.hpp"

#include "jch/solvers.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>
#include <string>

namespace jch::oracle {

namespace {

int cutoff_of(const LatticeSpec& lattice) {
    lattice.validate();
    if (!lattice.photon_cutoff)
        throw std::invalid_argument("oracle: lattice needs an explicit photon cutoff");
    return *lattice.photon_cutoff;
}

std::size_t encode(const std::vector<SiteConfig>& cfg, int local_dim) {
    std::size_t index = 0;
    for (const auto& sc : cfg) index = index * static_cast<std::size_t>(local_dim) + sc.local_index();
    return index;
}

}  // namespace

std::size_t product_dimension(const LatticeSpec& lattice) {
    const int cutoff = cutoff_of(lattice);
    const double local = 2.0 * (cutoff + 1);
    const double dim = std::pow(local, lattice.num_sites);
    if (dim > static_cast<double>(max_dense_dimension))
        throw std::invalid_argument("oracle: product dimension " + std::to_string(dim) +
                                    " exceeds the cap of " + std::to_string(max_dense_dimension));
    return static_cast<std::size_t>(dim);
}

std::vector<SiteConfig> product_config(const LatticeSpec& lattice, std::size_t index) {
    const int local = 2 * (cutoff_of(lattice) + 1);
    std::vector<SiteConfig> cfg(static_cast<std::size_t>(lattice.num_sites));
    for (int k = lattice.num_sites - 1; k >= 0; --k) {
        const int digit = static_cast<int>(index % static_cast<std::size_t>(local));
        index /= static_cast<std::size_t>(local);
        cfg[static_cast<std::size_t>(k)] = SiteConfig{digit / 2, digit % 2 == 1};
    }
    return cfg;
}

int product_excitations(const LatticeSpec& lattice, std::size_t index) {
    int total = 0;
    for (const auto& sc : product_config(lattice, index)) total += sc.excitations();
    return total;
}

DenseOperator dense_hamiltonian(const LatticeSpec& lattice, const ModelParams& params, Frame frame) {
    params.validate();
    const std::size_t dim = product_dimension(lattice);
    const int cutoff = *lattice.photon_cutoff;
    const int local = 2 * (cutoff + 1);
    const auto bonds = lattice.bonds();

    DenseOperator H{lattice, cutoff, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                            static_cast<Eigen::Index>(dim))};
    auto add = [&](const std::vector<SiteConfig>& to, std::size_t from, double value) {
        H.matrix(static_cast<Eigen::Index>(encode(to, local)), static_cast<Eigen::Index>(from)) += value;
    };

    for (std::size_t i = 0; i < dim; ++i) {
        const auto cfg = product_config(lattice, i);
        double diag = 0.0;
        for (const auto& sc : cfg) {
            if (frame == Frame::lab) diag += params.omega_d * sc.photon_number;
            if (sc.atom_excited)
                diag += params.detuning + (frame == Frame::lab ? params.omega_d : 0.0);
        }
        H.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += diag;

        for (std::size_t k = 0; k < cfg.size(); ++k) {
            auto out = cfg;
            const auto sc = cfg[k];
            if (sc.atom_excited && sc.photon_number < cutoff) {  // a^† σ^-
                out[k] = SiteConfig{sc.photon_number + 1, false};
                add(out, i, params.g * std::sqrt(static_cast<double>(sc.photon_number + 1)));
            } else if (!sc.atom_excited && sc.photon_number > 0) {  // a σ^+
                out[k] = SiteConfig{sc.photon_number - 1, true};
                add(out, i, params.g * std::sqrt(static_cast<double>(sc.photon_number)));
            }
        }
        for (const auto& [k, l] : bonds) {
            for (const auto& [to, from] : {std::pair{k, l}, std::pair{l, k}}) {
                const auto src = cfg[static_cast<std::size_t>(from)];
                const auto dst = cfg[static_cast<std::size_t>(to)];
                if (src.photon_number == 0 || dst.photon_number == cutoff) continue;
                auto out = cfg;
                out[static_cast<std::size_t>(from)].photon_number -= 1;
                out[static_cast<std::size_t>(to)].photon_number += 1;
                add(out, i, params.hop_A * std::sqrt(static_cast<double>(src.photon_number) *
                                                     (dst.photon_number + 1)));
            }
        }
    }
    return H;
}

std::vector<Eigen::MatrixXcd> dense_collapse_operators(const LatticeSpec& lattice,
                                                       const ModelParams& params) {
    params.validate();
    const std::size_t dim = product_dimension(lattice);
    const int local = 2 * (*lattice.photon_cutoff + 1);
    std::vector<Eigen::MatrixXcd> out;
    for (const bool photon : {true, false}) {
        const double rate = photon ? params.kappa : params.gamma;
        if (rate == 0.0) continue;
        for (int k = 0; k < lattice.num_sites; ++k) {
            Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                        static_cast<Eigen::Index>(dim));
            for (std::size_t i = 0; i < dim; ++i) {
                auto cfg = product_config(lattice, i);
                auto& sc = cfg[static_cast<std::size_t>(k)];
                double value = 0.0;
                if (photon && sc.photon_number > 0) {
                    value = std::sqrt(rate * sc.photon_number);
                    sc.photon_number -= 1;
                } else if (!photon && sc.atom_excited) {
                    value = std::sqrt(rate);
                    sc.atom_excited = false;
                } else {
                    continue;
                }
                C(static_cast<Eigen::Index>(encode(cfg, local)), static_cast<Eigen::Index>(i)) = value;
            }
            out.push_back(std::move(C));
        }
    }
    return out;
}

std::vector<std::size_t> block_indices(const LatticeSpec& lattice, int total) {
    const std::size_t dim = product_dimension(lattice);
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < dim; ++i)
        if (product_excitations(lattice, i) == total) idx.push_back(i);
    return idx;
}

Eigen::MatrixXcd block(const DenseOperator& H, int total) {
    const auto idx = block_indices(H.lattice, total);
    const auto n = static_cast<Eigen::Index>(idx.size());
    Eigen::MatrixXcd B(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c)
            B(r, c) = H.matrix(static_cast<Eigen::Index>(idx[static_cast<std::size_t>(r)]),
                               static_cast<Eigen::Index>(idx[static_cast<std::size_t>(c)]));
    return B;
}

Eigen::VectorXd block_eigenvalues(const DenseOperator& H, int total) {
    const Eigen::MatrixXcd B = block(H, total);
    if (B.size() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("oracle: block eigensolve failed");
    return es.eigenvalues();
}

double off_block_max(const DenseOperator& H) {
    const std::size_t dim = H.dimension();
    std::vector<int> totals(dim);
    for (std::size_t i = 0; i < dim; ++i) totals[i] = product_excitations(H.lattice, i);
    double worst = 0.0;
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c)
            if (totals[r] != totals[c])
                worst = std::max(worst, std::abs(H.matrix(static_cast<Eigen::Index>(r),
                                                          static_cast<Eigen::Index>(c))));
    return worst;
}

Eigen::VectorXcd embed(const QuantumState& state, const LatticeSpec& lattice) {
    if (!state.sector) throw std::invalid_argument("oracle::embed: state has no sector");
    const int cutoff = cutoff_of(lattice);
    if (state.sector->photon_cutoff() != cutoff || state.sector->num_sites() != lattice.num_sites)
        throw std::invalid_argument("oracle::embed: sector does not match the lattice");
    const std::size_t dim = product_dimension(lattice);
    const int local = 2 * (cutoff + 1);
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim));
    for (std::size_t i = 0; i < state.dimension(); ++i) {
        const auto cfg = state.sector->config(i);
        const std::vector<SiteConfig> v(cfg.begin(), cfg.end());
        full[static_cast<Eigen::Index>(encode(v, local))] = state.amplitudes[static_cast<Eigen::Index>(i)];
    }
    return full;
}

std::vector<Eigen::MatrixXcd> dense_lindblad_propagate(const LatticeSpec& lattice,
                                                       const ModelParams& params,
                                                       const Eigen::MatrixXcd& rho0,
                                                       const std::vector<double>& t_grid,
                                                       double tolerance) {
    const std::size_t dim = product_dimension(lattice);
    if (dim > max_lindblad_dimension)
        throw std::invalid_argument("oracle: Lindblad propagation limited to dimension " +
                                    std::to_string(max_lindblad_dimension));
    if (static_cast<std::size_t>(rho0.rows()) != dim || rho0.rows() != rho0.cols())
        throw std::invalid_argument("oracle: rho0 has the wrong shape");

    const Eigen::MatrixXcd H = dense_hamiltonian(lattice, params).matrix;
    const auto C = dense_collapse_operators(lattice, params);
    const auto d = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXcd loss = Eigen::MatrixXcd::Zero(d, d);
    for (const auto& c : C) loss += c.adjoint() * c;
    const cplx I(0.0, 1.0);
    // Effective generator K = -iH - ½ Σ C^†C, so L(ρ) = Kρ + ρK^† + Σ CρC^†.
    const Eigen::MatrixXcd K = -I * H - 0.5 * loss;

    // krylov_expmv computes exp(-i t M) v; M = i L gives exp(t L).
    auto apply = [&](const Eigen::VectorXcd& x) -> Eigen::VectorXcd {
        const Eigen::Map<const Eigen::MatrixXcd> rho(x.data(), d, d);
        Eigen::MatrixXcd out = K * rho + rho * K.adjoint();
        for (const auto& c : C) out.noalias() += c * rho * c.adjoint();
        return I * Eigen::Map<const Eigen::VectorXcd>(out.data(), d * d);
    };

    std::vector<Eigen::MatrixXcd> out;
    out.reserve(t_grid.size());
    Eigen::MatrixXcd rho = 0.5 * (rho0 + rho0.adjoint());
    double t = 0.0;
    for (const double t_out : t_grid) {
        if (t_out < t) throw std::invalid_argument("oracle: t_grid must be nondecreasing and >= 0");
        if (t_out > t) {
            const Eigen::VectorXcd v = Eigen::Map<const Eigen::VectorXcd>(rho.data(), d * d);
            const Eigen::VectorXcd w = krylov_expmv(apply, v, t_out - t, tolerance, 40);
            rho = Eigen::Map<const Eigen::MatrixXcd>(w.data(), d, d);
            rho = 0.5 * (rho + rho.adjoint()).eval();
            t = t_out;
        }
        out.push_back(rho);
    }
    return out;
}

}  // namespace jch::oracle
