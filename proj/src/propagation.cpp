// propagation.cpp — Krylov exponentials, CFM4 Magnus stepping, detuning ramps

#include "jch/solvers.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jch {

// ----------------------------------------------------------------- operators

TimeDependentOperator TimeDependentOperator::constant(SparseOperator op) {
    TimeDependentOperator out;
    out.terms.push_back({std::move(op), {}});
    return out;
}

std::size_t TimeDependentOperator::dimension() const {
    if (terms.empty()) throw std::logic_error("TimeDependentOperator: no terms");
    return terms.front().op.cols();
}

bool TimeDependentOperator::time_independent() const {
    return std::all_of(terms.begin(), terms.end(),
                       [](const Term& t) { return !static_cast<bool>(t.coefficient); });
}

std::vector<double> TimeDependentOperator::coefficients(double t) const {
    std::vector<double> c;
    c.reserve(terms.size());
    for (const auto& term : terms) c.push_back(term.coefficient ? term.coefficient(t) : 1.0);
    return c;
}

Eigen::VectorXcd TimeDependentOperator::apply_combination(const Eigen::VectorXcd& x,
                                                          const std::vector<double>& weights) const {
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
    for (std::size_t j = 0; j < terms.size(); ++j) {
        if (weights[j] == 0.0) continue;
        y.noalias() += weights[j] * (terms[j].op.matrix * x);
    }
    return y;
}

// --------------------------------------------------------------- Krylov expmv

Eigen::VectorXcd krylov_expmv(const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                              const Eigen::VectorXcd& v, double t, double tolerance,
                              int krylov_dim, long long* matvecs) {
    if (t < 0.0) throw std::invalid_argument("krylov_expmv: negative time");
    const Eigen::Index n = v.size();
    const Eigen::Index m_max = std::min<Eigen::Index>(std::max(krylov_dim, 2), n);
    const cplx minus_i(0.0, -1.0);

    Eigen::VectorXcd w = v;
    double t_done = 0.0;
    Eigen::MatrixXcd V(n, m_max + 1);
    Eigen::MatrixXcd Hm(m_max + 1, m_max);
    int substeps = 0;
    while (t_done < t) {
        const double beta = w.norm();
        if (beta == 0.0) return w;
        V.setZero();
        Hm.setZero();
        V.col(0) = w / beta;
        Eigen::Index m = m_max;
        bool happy = false;
        for (Eigen::Index j = 0; j < m_max; ++j) {
            Eigen::VectorXcd p = apply(V.col(j));
            if (matvecs) ++*matvecs;
            for (int pass = 0; pass < 2; ++pass) {
                const Eigen::VectorXcd h = V.leftCols(j + 1).adjoint() * p;
                p.noalias() -= V.leftCols(j + 1) * h;
                Hm.col(j).head(j + 1) += h;
            }
            const double s = p.norm();
            const double scale = std::max(1.0, Hm.col(j).head(j + 1).norm());
            if (s <= 1e-13 * scale) {
                m = j + 1;
                happy = true;
                break;
            }
            Hm(j + 1, j) = s;
            V.col(j + 1) = p / s;
        }

        double tau = t - t_done;
        Eigen::VectorXcd coeffs;
        for (int attempt = 0;; ++attempt) {
            // Augmented (m+1)x(m+1) exponential: the last row yields e_m^T phi_1(tau A) e_1
            // for the a posteriori error estimate.
            Eigen::MatrixXcd aug = Eigen::MatrixXcd::Zero(m + 1, m + 1);
            aug.topLeftCorner(m, m) = minus_i * tau * Hm.topLeftCorner(m, m);
            aug(m, m - 1) = 1.0;
            const Eigen::MatrixXcd E = aug.exp();
            double err = 0.0;
            if (!happy) err = beta * std::abs(Hm(m, m - 1)) * tau * std::abs(E(m, 0));
            const double allowed = std::max(tolerance * tau, 1e-15 * beta);
            if (happy || err <= allowed || attempt > 60) {
                if (!(E.allFinite())) throw std::runtime_error("krylov_expmv: non-finite exponential");
                coeffs = E.col(0).head(m);
                break;
            }
            const double ratio = std::pow(allowed / err, 1.0 / static_cast<double>(m));
            tau *= std::clamp(0.9 * ratio, 0.05, 0.9);
        }
        w = beta * (V.leftCols(m) * coeffs);
        t_done += tau;
        if (++substeps > 1'000'000) throw std::runtime_error("krylov_expmv: too many substeps");
    }
    return w;
}

// ----------------------------------------------------------------- CFM4 Magnus

namespace {
const double kSqrt3 = std::sqrt(3.0);
const double kNode1 = 0.5 - kSqrt3 / 6.0;
const double kNode2 = 0.5 + kSqrt3 / 6.0;
const double kAlpha1 = 0.25 - kSqrt3 / 6.0;
const double kAlpha2 = 0.25 + kSqrt3 / 6.0;
}  // namespace

Cfm4Weights cfm4_weights(const TimeDependentOperator& H, double t, double h) {
    const auto c1 = H.coefficients(t + kNode1 * h);
    const auto c2 = H.coefficients(t + kNode2 * h);
    Cfm4Weights w{std::vector<double>(c1.size()), std::vector<double>(c1.size())};
    // Weights are doubled so each exponential runs for h/2 with an O(1) generator.
    for (std::size_t j = 0; j < c1.size(); ++j) {
        w.first[j] = 2.0 * (kAlpha2 * c1[j] + kAlpha1 * c2[j]);
        w.second[j] = 2.0 * (kAlpha1 * c1[j] + kAlpha2 * c2[j]);
    }
    return w;
}

MagnusPropagator::MagnusPropagator(const TimeDependentOperator& H, EvolveOptions opts)
    : H_(H), opts_(opts), h_(opts.initial_step) {
    if (H_.terms.empty()) throw std::invalid_argument("MagnusPropagator: empty operator");
    if (!(opts_.tolerance > 0.0)) throw std::invalid_argument("MagnusPropagator: tolerance must be > 0");
}

Eigen::VectorXcd MagnusPropagator::exp_combination(const Eigen::VectorXcd& psi, double h,
                                                   const std::vector<double>& weights,
                                                   double tolerance) {
    auto apply = [&](const Eigen::VectorXcd& x) { return H_.apply_combination(x, weights); };
    return krylov_expmv(apply, psi, h, tolerance, opts_.krylov_dim, &stats_.matvecs);
}

Eigen::VectorXcd MagnusPropagator::step(const Eigen::VectorXcd& psi, double t, double h) {
    if (h == 0.0) return psi;
    const double ktol = 0.1 * opts_.tolerance;
    if (H_.time_independent()) {
        return exp_combination(psi, h, std::vector<double>(H_.terms.size(), 1.0), ktol);
    }
    const auto w = cfm4_weights(H_, t, h);
    const Eigen::VectorXcd half = exp_combination(psi, 0.5 * h, w.first, ktol);
    return exp_combination(half, 0.5 * h, w.second, ktol);
}

double MagnusPropagator::advance(
    Eigen::VectorXcd& psi, double t0, double t1,
    const std::function<bool(double, const Eigen::VectorXcd&, double, const Eigen::VectorXcd&)>&
        on_step) {
    if (t1 < t0) throw std::invalid_argument("MagnusPropagator::advance: t1 < t0");
    double t = t0;
    const bool constant = H_.time_independent();
    while (t < t1) {
        if (++stats_.steps > opts_.max_steps)
            throw std::runtime_error("evolve: step budget exhausted (tolerance failure)");
        const double remaining = t1 - t;
        if (constant) {
            // CFM4 is exact for a constant generator; only the Krylov error is controlled.
            const double h = std::min(remaining, opts_.max_step);
            Eigen::VectorXcd next = step(psi, t, h);
            const double t_next = (h == remaining) ? t1 : t + h;
            if (on_step && !on_step(t, psi, t_next, next)) {
                psi = std::move(next);
                return t_next;
            }
            psi = std::move(next);
            t = t_next;
            continue;
        }
        const double h = std::min({h_, remaining, opts_.max_step});
        const Eigen::VectorXcd full = step(psi, t, h);
        const Eigen::VectorXcd mid = step(psi, t, 0.5 * h);
        Eigen::VectorXcd fine = step(mid, t + 0.5 * h, 0.5 * h);
        const double err = (full - fine).norm() / 15.0;
        const double allowed = opts_.tolerance * h;
        const double factor = err == 0.0 ? 4.0 : 0.9 * std::pow(allowed / err, 0.25);
        if (err <= allowed) {
            const double t_next = (h == remaining) ? t1 : t + h;
            // A step clipped to the interval end leaves the carried step size alone.
            if (h >= h_) h_ = std::min(h * std::clamp(factor, 0.2, 4.0), opts_.max_step);
            if (on_step && !on_step(t, psi, t_next, fine)) {
                psi = std::move(fine);
                return t_next;
            }
            psi = std::move(fine);
            t = t_next;
        } else {
            ++stats_.rejected;
            h_ = h * std::clamp(factor, 0.1, 0.9);
            if (h_ < 1e-14 * std::max(1.0, std::abs(t)))
                throw std::runtime_error("evolve: step size underflow (tolerance failure)");
        }
    }
    return t;
}

namespace {

// Exact propagation through the eigendecomposition of a small constant Hermitian H.
std::vector<Eigen::VectorXcd> spectral_evolve(const TimeDependentOperator& H,
                                              const Eigen::VectorXcd& psi0,
                                              const std::vector<double>& output_times) {
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(psi0.size(), psi0.size());
    for (const auto& term : H.terms) dense += term.op.to_dense();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
    if (es.info() != Eigen::Success) throw std::runtime_error("evolve: spectral decomposition failed");
    const Eigen::VectorXcd c = es.eigenvectors().adjoint() * psi0;
    std::vector<Eigen::VectorXcd> out;
    out.reserve(output_times.size());
    double t_prev = 0.0;
    for (const double t : output_times) {
        if (t < t_prev) throw std::invalid_argument("evolve: output times must be nondecreasing and >= 0");
        t_prev = t;
        Eigen::VectorXcd phased(c.size());
        for (Eigen::Index i = 0; i < c.size(); ++i)
            phased[i] = std::polar(1.0, -es.eigenvalues()[i] * t) * c[i];
        out.push_back(es.eigenvectors() * phased);
    }
    return out;
}

}  // namespace

std::vector<Eigen::VectorXcd> evolve(const TimeDependentOperator& H, const Eigen::VectorXcd& psi0,
                                     const std::vector<double>& output_times,
                                     const EvolveOptions& opts, EvolveStats* stats) {
    if (static_cast<std::size_t>(psi0.size()) != H.dimension())
        throw std::invalid_argument("evolve: state dimension does not match operator");
    const bool hermitian = std::all_of(H.terms.begin(), H.terms.end(),
                                       [](const auto& term) { return term.op.hermitian; });
    if (H.time_independent() && hermitian && H.dimension() <= opts.spectral_threshold) {
        if (stats) *stats = EvolveStats{};
        return spectral_evolve(H, psi0, output_times);
    }
    MagnusPropagator prop(H, opts);
    std::vector<Eigen::VectorXcd> out;
    out.reserve(output_times.size());
    Eigen::VectorXcd psi = psi0;
    double t = 0.0;
    for (const double t_out : output_times) {
        if (t_out < t) throw std::invalid_argument("evolve: output times must be nondecreasing and >= 0");
        t = prop.advance(psi, t, t_out);
        out.push_back(psi);
    }
    if (stats) *stats = prop.stats();
    return out;
}

std::vector<QuantumState> evolve(const TimeDependentOperator& H, const QuantumState& state0,
                                 const std::vector<double>& output_times, const EvolveOptions& opts) {
    const auto vecs = evolve(H, state0.amplitudes, output_times, opts);
    std::vector<QuantumState> out;
    out.reserve(vecs.size());
    for (const auto& v : vecs) out.push_back(QuantumState{state0.sector, v});
    return out;
}

// --------------------------------------------------------------------- ramps

std::string to_string(RampShape s) {
    return s == RampShape::linear_in_log ? "linear_in_log" : "smooth_step";
}

RampShape ramp_shape_from_string(const std::string& s) {
    if (s == "linear_in_log") return RampShape::linear_in_log;
    if (s == "smooth_step") return RampShape::smooth_step;
    throw std::invalid_argument("unknown ramp shape '" + s + "'");
}

void RampSchedule::validate() const {
    if (!(duration > 0.0)) throw std::invalid_argument("RampSchedule: duration must be > 0");
    if (delta_start < 0.0 || delta_end < 0.0)
        throw std::invalid_argument("RampSchedule: detunings must be >= 0 for log-space ramps");
}

std::function<double(double)> RampSchedule::profile(double hop_A) const {
    validate();
    if (!(hop_A > 0.0)) throw std::invalid_argument("RampSchedule: hop_A must be > 0");
    const double T = physical_duration(hop_A);
    if (delta_start == delta_end) {
        const double d = delta_start;
        return [d](double) { return d; };
    }
    const double ls = std::log(std::max(delta_start, log_floor));
    const double le = std::log(std::max(delta_end, log_floor));
    const RampShape sh = shape;
    return [=](double t) {
        const double x = std::clamp(t / T, 0.0, 1.0);
        const double s = sh == RampShape::linear_in_log ? x : x * x * (3.0 - 2.0 * x);
        return std::exp(ls + (le - ls) * s);
    };
}

TimeDependentOperator ramp_hamiltonian(const SectorPtr& sector, const ModelParams& params,
                                       std::function<double(double)> detuning) {
    auto parts = build_hamiltonian_parts(sector, params);
    TimeDependentOperator H;
    H.terms.push_back({std::move(parts.detuning_free), {}});
    H.terms.push_back({std::move(parts.atom_number), std::move(detuning)});
    return H;
}

RampResult adiabatic_ramp(const SectorPtr& sector, const ModelParams& params,
                          const RampSchedule& schedule, const QuantumState& state0,
                          const EvolveOptions& opts) {
    if (state0.sector != sector && (!state0.sector || state0.dimension() != sector->dimension()))
        throw std::invalid_argument("adiabatic_ramp: initial state is not in the ramp sector");
    const auto profile = schedule.profile(params.hop_A);
    const double T = schedule.physical_duration(params.hop_A);
    const auto H = ramp_hamiltonian(sector, params, profile);
    auto states = evolve(H, state0.amplitudes, {T}, opts);

    RampResult out;
    out.final_detuning = profile(T);
    out.state = QuantumState{sector, std::move(states.back())};
    ModelParams p_end = params;
    p_end.detuning = out.final_detuning;
    const auto gs = ground_state(build_hamiltonian(sector, p_end));
    out.ground_overlap = std::norm(gs.vector.dot(out.state.amplitudes));
    return out;
}

}  // namespace jch
