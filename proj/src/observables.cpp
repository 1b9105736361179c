// observables.cpp — Excitation moments, polariton projectors, and fidelities

#include "jch/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace jch {

namespace {

void check_site(const QuantumState& state, int site) {
    if (!state.sector) throw std::invalid_argument("observable: state has no sector");
    if (site < 0 || site >= state.sector->num_sites())
        throw std::out_of_range("observable: site out of range");
}

}  // namespace

Moments excitation_moments(const QuantumState& state, int site) {
    check_site(state, site);
    const auto& sector = *state.sector;
    double m1 = 0.0;
    double m2 = 0.0;
    for (std::size_t i = 0; i < sector.dimension(); ++i) {
        const double p = std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]);
        const double n = sector.local_occupation(i, site).excitations();
        m1 += p * n;
        m2 += p * n * n;
    }
    const double norm2 = state.amplitudes.squaredNorm();
    m1 /= norm2;
    m2 /= norm2;
    return {m1, m2 - m1 * m1};
}

double polariton_population(const QuantumState& state, int site, int n, Branch branch) {
    check_site(state, site);
    const auto& sector = *state.sector;
    if (n < 1) throw std::invalid_argument("polariton_population: n must be >= 1");
    if (n > sector.photon_cutoff() + 1)
        throw std::invalid_argument("polariton_population: n beyond photon cutoff");

    const double sign = branch == Branch::plus ? 1.0 : -1.0;
    const double r = std::sqrt(0.5);
    const auto k = static_cast<std::size_t>(site);
    std::vector<SiteConfig> work(static_cast<std::size_t>(sector.num_sites()));
    double pop = 0.0;
    // Pair each |g,n>_k component with its |e,n-1>_k partner (same configuration elsewhere).
    for (std::size_t i = 0; i < sector.dimension(); ++i) {
        const auto cfg = sector.config(i);
        const auto local = cfg[k];
        const auto amp = state.amplitudes[static_cast<Eigen::Index>(i)];
        if (!local.atom_excited && local.photon_number == n) {
            std::copy(cfg.begin(), cfg.end(), work.begin());
            work[k] = SiteConfig{n - 1, true};
            const auto j = sector.index_of(work);
            const cplx partner = j ? state.amplitudes[static_cast<Eigen::Index>(*j)] : cplx{};
            pop += std::norm(r * (amp + sign * partner));
        } else if (local.atom_excited && local.photon_number == n - 1) {
            std::copy(cfg.begin(), cfg.end(), work.begin());
            work[k] = SiteConfig{n, false};
            if (!sector.index_of(work)) pop += std::norm(r * amp);
        }
    }
    return pop / state.amplitudes.squaredNorm();
}

double ground_population(const QuantumState& state, int site) {
    check_site(state, site);
    const auto& sector = *state.sector;
    double pop = 0.0;
    for (std::size_t i = 0; i < sector.dimension(); ++i) {
        if (sector.local_occupation(i, site).excitations() == 0)
            pop += std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]);
    }
    return pop / state.amplitudes.squaredNorm();
}

double fidelity(const QuantumState& a, const QuantumState& b) {
    const bool same = a.sector == b.sector ||
                      (a.sector && b.sector &&
                       a.sector->total_excitations() == b.sector->total_excitations() &&
                       a.sector->dimension() == b.sector->dimension());
    if (!same || a.dimension() != b.dimension())
        throw std::invalid_argument("fidelity: states live on different sectors");
    const cplx overlap = a.amplitudes.dot(b.amplitudes);
    return std::norm(overlap) / (a.amplitudes.squaredNorm() * b.amplitudes.squaredNorm());
}

int middle_site(int num_sites) {
    if (num_sites < 1) throw std::invalid_argument("middle_site: num_sites must be >= 1");
    return (num_sites + 1) / 2 - 1;
}

EnsembleVariance ensemble_excitation_variance(const std::vector<QuantumState>& samples, int site) {
    if (samples.empty()) throw std::invalid_argument("ensemble_excitation_variance: empty ensemble");
    const double M = static_cast<double>(samples.size());
    double var_sum = 0.0;
    double var_sq = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;
    std::vector<double> vars;
    vars.reserve(samples.size());
    for (const auto& s : samples) {
        const auto mo = excitation_moments(s, site);
        vars.push_back(mo.variance);
        var_sum += mo.variance;
        m1 += mo.mean;
        m2 += mo.variance + mo.mean * mo.mean;
    }
    EnsembleVariance out;
    out.trajectory_mean = var_sum / M;
    if (samples.size() > 1) {
        for (const double v : vars) var_sq += (v - out.trajectory_mean) * (v - out.trajectory_mean);
        out.trajectory_stderr = std::sqrt(var_sq / (M - 1.0) / M);
    }
    m1 /= M;
    m2 /= M;
    out.mixed_state = m2 - m1 * m1;
    return out;
}

}  // namespace jch
