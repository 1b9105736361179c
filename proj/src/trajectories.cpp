// trajectories.cpp — First-order quantum-jump unraveling across excitation sectors

#include "jch/solvers.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

namespace jch {

OpenSystem make_open_system(const SectorFamily& family, const ModelParams& params,
                            std::function<double(double)> detuning) {
    params.validate();
    OpenSystem sys;
    const cplx minus_half_i(0.0, -0.5);
    for (int m = 0; m <= family.max_total(); ++m) {
        const auto sector = family.sector(m);
        sys.sectors.push_back(sector);
        auto collapse = build_collapse_operators(family, m, params);

        const auto dim = static_cast<Eigen::Index>(sector->dimension());
        CSparse decay(dim, dim);
        for (const auto& c : collapse) decay += CSparse(c.op.matrix.adjoint() * c.op.matrix);
        SparseOperator loss;
        loss.matrix = minus_half_i * decay;
        loss.domain = sector;
        loss.codomain = sector;

        TimeDependentOperator H;
        if (detuning) {
            H = ramp_hamiltonian(sector, params, detuning);
        } else {
            H = TimeDependentOperator::constant(build_hamiltonian(sector, params));
        }
        TimeDependentOperator drift = H;
        if (!collapse.empty()) {
            if (detuning) {
                drift.terms.push_back({std::move(loss), {}});
            } else {
                drift.terms.front().op.matrix += loss.matrix;
                drift.terms.front().op.hermitian = false;
            }
        }
        sys.hamiltonians.push_back(std::move(H));
        sys.drifts.push_back(std::move(drift));
        sys.collapse.push_back(std::move(collapse));
    }
    sys.tables.resize(sys.sectors.size());
    return sys;
}

// ---------------------------------------------------------------- step tables

class StepTable {
public:
    static constexpr std::size_t block_length = 64;

    StepTable(const TimeDependentOperator& drift, const std::vector<double>& output_times,
              const EvolveOptions& opts);

    // One CFM4 step over [t, t + h] (a single exponential for constant drifts).
    Eigen::MatrixXcd single(double t, double h) const;
    // The accepted propagator of grid step k, recomputed exactly as tabulated.
    Eigen::MatrixXcd grid_step(std::size_t k) const;

    // k with nodes[k] <= t < nodes[k + 1]; nodes.size() - 1 when t >= the last node.
    std::size_t locate(double t) const;

    std::vector<double> nodes;
    std::vector<Eigen::MatrixXcd> blocks;     // product of the steps of each block
    std::vector<std::size_t> block_end;       // end node of each block
    std::vector<std::ptrdiff_t> block_from;   // block starting at node k, or -1

private:
    Eigen::MatrixXcd exponential(const std::vector<double>& weights, double tau) const;

    TimeDependentOperator drift_;
    std::vector<Eigen::MatrixXcd> dense_;
    bool constant_{false};
};

StepTable::StepTable(const TimeDependentOperator& drift, const std::vector<double>& output_times,
                     const EvolveOptions& opts)
    : drift_(drift), constant_(drift.time_independent()) {
    if (drift_.terms.empty()) throw std::invalid_argument("StepTable: empty drift");
    for (const auto& term : drift_.terms) dense_.push_back(term.op.to_dense());
    const auto dim = static_cast<Eigen::Index>(drift_.dimension());

    nodes.push_back(0.0);
    block_from.push_back(-1);
    Eigen::MatrixXcd product = Eigen::MatrixXcd::Identity(dim, dim);
    std::size_t in_block = 0;
    std::size_t block_start = 0;
    auto close_block = [&]() {
        if (in_block == 0) return;
        block_from[block_start] = static_cast<std::ptrdiff_t>(blocks.size());
        blocks.push_back(product);
        block_end.push_back(nodes.size() - 1);
        product.setIdentity();
        in_block = 0;
        block_start = nodes.size() - 1;
    };
    auto accept = [&](double t_next, const Eigen::MatrixXcd& U) {
        nodes.push_back(t_next);
        block_from.push_back(-1);
        product = U * product;
        if (++in_block == block_length) close_block();
        if (static_cast<long long>(nodes.size()) > opts.max_steps)
            throw std::runtime_error("StepTable: step budget exhausted (tolerance failure)");
    };

    double t = 0.0;
    double h = opts.initial_step;
    for (const double t_out : output_times) {
        if (t_out < t) throw std::invalid_argument("StepTable: output times must be sorted and >= 0");
        while (t < t_out) {
            const double remaining = t_out - t;
            if (constant_) {
                const double step = std::min(remaining, opts.max_step);
                const double t_next = step == remaining ? t_out : t + step;
                accept(t_next, single(t, step));
                t = t_next;
                continue;
            }
            const double hh = std::min({h, remaining, opts.max_step});
            const Eigen::MatrixXcd full = single(t, hh);
            const Eigen::MatrixXcd fine = single(t + 0.5 * hh, 0.5 * hh) * single(t, 0.5 * hh);
            // Frobenius norm bounds the error for every normalized state.
            const double err = (full - fine).norm() / 15.0;
            const double allowed = opts.tolerance * hh;
            const double factor = err == 0.0 ? 4.0 : 0.9 * std::pow(allowed / err, 0.25);
            if (err <= allowed) {
                const double t_next = hh == remaining ? t_out : t + hh;
                if (hh >= h) h = std::min(hh * std::clamp(factor, 0.2, 4.0), opts.max_step);
                accept(t_next, fine);
                t = t_next;
            } else {
                h = hh * std::clamp(factor, 0.1, 0.9);
                if (h < 1e-14 * std::max(1.0, std::abs(t)))
                    throw std::runtime_error("StepTable: step size underflow (tolerance failure)");
            }
        }
        close_block();  // output times always end a block
    }
}

Eigen::MatrixXcd StepTable::exponential(const std::vector<double>& weights, double tau) const {
    const auto dim = static_cast<Eigen::Index>(drift_.dimension());
    Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t j = 0; j < dense_.size(); ++j)
        if (weights[j] != 0.0) M += weights[j] * dense_[j];
    return (cplx(0.0, -tau) * M).exp();
}

Eigen::MatrixXcd StepTable::single(double t, double h) const {
    if (constant_) return exponential(std::vector<double>(dense_.size(), 1.0), h);
    const auto w = cfm4_weights(drift_, t, h);
    return exponential(w.second, 0.5 * h) * exponential(w.first, 0.5 * h);
}

Eigen::MatrixXcd StepTable::grid_step(std::size_t k) const {
    const double t = nodes.at(k);
    const double h = nodes.at(k + 1) - t;
    if (constant_) return single(t, h);
    return single(t + 0.5 * h, 0.5 * h) * single(t, 0.5 * h);
}

std::size_t StepTable::locate(double t) const {
    const auto it = std::upper_bound(nodes.begin(), nodes.end(), t);
    if (it == nodes.begin()) return 0;
    return static_cast<std::size_t>(it - nodes.begin()) - 1;
}

void tabulate_drifts(OpenSystem& system, const std::vector<double>& output_times,
                     const EvolveOptions& opts, std::size_t max_dimension) {
    system.tables.assign(system.sectors.size(), nullptr);
    for (std::size_t m = 0; m < system.sectors.size(); ++m) {
        if (system.sectors[m]->dimension() > max_dimension) continue;
        system.tables[m] = std::make_shared<const StepTable>(system.drifts[m], output_times, opts);
    }
}

// --------------------------------------------------------------- trajectories

std::uint64_t trajectory_seed(std::uint64_t base_seed, std::uint64_t index) {
    // splitmix64 finalizer over (base, index)
    std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

namespace {

class Uniform {
public:
    explicit Uniform(std::uint64_t seed) : rng_(seed) {}
    // 53-bit mantissa in (0, 1]; independent of the standard library's distributions.
    double operator()() { return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53; }

private:
    std::mt19937_64 rng_;
};

struct Segment {
    double time;   // where the segment stopped
    bool crossed;  // true when it stopped at a located threshold crossing
};

// Bisects the crossing of |psi|^2 = threshold inside [t, t_hi]; `propagate(h)`
// returns the state at t + h from the state at t. On return psi holds the state
// at the returned time, which lies just past the crossing.
template <class Propagate>
double bisect_crossing(Eigen::VectorXcd& psi, double t, double t_hi, Eigen::VectorXcd at_hi,
                       double threshold, double tolerance, Propagate&& propagate) {
    double lo = t;
    double hi = t_hi;
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        Eigen::VectorXcd trial = propagate(mid - t);
        if (trial.squaredNorm() > threshold) {
            lo = mid;
        } else {
            hi = mid;
            at_hi = std::move(trial);
        }
    }
    psi = std::move(at_hi);
    return hi;
}

Segment krylov_segment(MagnusPropagator& prop, Eigen::VectorXcd& psi, double t, double t_out,
                       double threshold, double tolerance) {
    double t_prev = t;
    Eigen::VectorXcd psi_prev;
    bool crossed = false;
    const double stopped = prop.advance(
        psi, t, t_out,
        [&](double ta, const Eigen::VectorXcd& pa, double, const Eigen::VectorXcd& pb) {
            if (pb.squaredNorm() > threshold) return true;
            t_prev = ta;
            psi_prev = pa;
            crossed = true;
            return false;
        });
    if (!crossed) return {stopped, false};
    // Always propagate from the accepted state at t_prev.
    const double hit = bisect_crossing(psi, t_prev, stopped, psi, threshold, tolerance,
                                       [&](double h) { return prop.step(psi_prev, t_prev, h); });
    return {hit, true};
}

Segment table_segment(const StepTable& table, Eigen::VectorXcd& psi, double t, double t_out,
                      double threshold, double tolerance) {
    const auto& nodes = table.nodes;
    std::size_t k = table.locate(t);
    while (t < t_out) {
        if (k + 1 >= nodes.size()) throw std::logic_error("table_segment: past the tabulated range");
        if (t == nodes[k] && table.block_from[k] >= 0) {
            const auto b = static_cast<std::size_t>(table.block_from[k]);
            const std::size_t end = table.block_end[b];
            if (nodes[end] <= t_out) {
                Eigen::VectorXcd next = table.blocks[b] * psi;
                if (next.squaredNorm() > threshold) {
                    psi = std::move(next);
                    t = nodes[end];
                    k = end;
                    continue;
                }
                // The crossing lies inside this block: walk it step by step.
            }
        }
        const double t_next = std::min(nodes[k + 1], t_out);
        const bool whole = t == nodes[k] && t_next == nodes[k + 1];
        Eigen::VectorXcd next = (whole ? table.grid_step(k) : table.single(t, t_next - t)) * psi;
        if (next.squaredNorm() > threshold) {
            psi = std::move(next);
            t = t_next;
            if (t == nodes[k + 1]) ++k;
            continue;
        }
        const Eigen::VectorXcd start = psi;
        const double t0 = t;
        const double hit = bisect_crossing(psi, t0, t_next, std::move(next), threshold, tolerance,
                                           [&](double h) { return Eigen::VectorXcd(table.single(t0, h) * start); });
        return {hit, true};
    }
    return {t, false};
}

}  // namespace

TrajectoryRecord quantum_trajectory(const OpenSystem& system, const QuantumState& state0,
                                    const std::vector<double>& output_times, std::uint64_t seed,
                                    const TrajectoryOptions& opts) {
    int m = state0.total_excitations();
    if (m < 0 || m >= static_cast<int>(system.sectors.size()))
        throw std::invalid_argument("quantum_trajectory: initial sector not covered by the system");
    if (state0.dimension() != system.sectors[static_cast<std::size_t>(m)]->dimension())
        throw std::invalid_argument("quantum_trajectory: initial state dimension mismatch");

    TrajectoryRecord rec;
    rec.seed = seed;
    rec.times = output_times;
    Uniform uniform(seed);

    Eigen::VectorXcd psi = state0.amplitudes / state0.amplitudes.norm();
    double threshold = uniform();
    double t = 0.0;

    std::vector<std::unique_ptr<MagnusPropagator>> props(system.sectors.size());
    auto segment = [&](double t_out) -> Segment {
        const auto mi = static_cast<std::size_t>(m);
        // Without jump channels the norm cannot decay; never look for a crossing.
        const double level = system.collapse[mi].empty() ? -1.0 : threshold;
        if (mi < system.tables.size() && system.tables[mi] &&
            t_out <= system.tables[mi]->nodes.back()) {
            return table_segment(*system.tables[mi], psi, t, t_out, level, opts.jump_time_tolerance);
        }
        auto& p = props[mi];
        if (!p) p = std::make_unique<MagnusPropagator>(system.drifts[mi], opts.evolve);
        return krylov_segment(*p, psi, t, t_out, level, opts.jump_time_tolerance);
    };

    for (const double t_out : output_times) {
        if (t_out < t) throw std::invalid_argument("quantum_trajectory: output times must be sorted");
        while (t < t_out) {
            const Segment seg = segment(t_out);
            t = seg.time;
            if (!seg.crossed) continue;

            const auto& channels = system.collapse[static_cast<std::size_t>(m)];
            std::vector<Eigen::VectorXcd> images;
            images.reserve(channels.size());
            double total_weight = 0.0;
            for (const auto& c : channels) {
                images.push_back(c.op.matrix * psi);
                total_weight += images.back().squaredNorm();
            }
            if (!(total_weight > 0.0)) throw std::runtime_error("quantum_trajectory: jump with zero rate");
            const double pick = uniform() * total_weight;
            std::size_t chosen = channels.size() - 1;
            double acc = 0.0;
            for (std::size_t j = 0; j < channels.size(); ++j) {
                acc += images[j].squaredNorm();
                if (pick <= acc) {
                    chosen = j;
                    break;
                }
            }
            rec.jumps.push_back(JumpEvent{t, static_cast<int>(chosen), m, channels[chosen].label()});
            psi = images[chosen] / images[chosen].norm();
            m -= 1;
            threshold = uniform();
        }
        rec.samples.push_back(
            QuantumState{system.sectors[static_cast<std::size_t>(m)], psi / psi.norm()});
    }
    return rec;
}

EnsembleSeries ensemble_average(const std::vector<TrajectoryRecord>& records,
                                const std::function<double(const QuantumState&)>& observable) {
    if (records.empty()) throw std::invalid_argument("ensemble_average: empty ensemble");
    const std::size_t n_times = records.front().samples.size();
    for (const auto& r : records)
        if (r.samples.size() != n_times || r.times != records.front().times)
            throw std::invalid_argument("ensemble_average: records do not share output times");

    const double M = static_cast<double>(records.size());
    EnsembleSeries out;
    out.mean.assign(n_times, 0.0);
    out.std_error.assign(n_times, 0.0);
    std::vector<double> values(records.size());
    for (std::size_t i = 0; i < n_times; ++i) {
        for (std::size_t r = 0; r < records.size(); ++r) values[r] = observable(records[r].samples[i]);
        double mean = 0.0;
        for (const double v : values) mean += v;
        mean /= M;
        out.mean[i] = mean;
        if (records.size() > 1) {
            double ss = 0.0;
            for (const double v : values) ss += (v - mean) * (v - mean);
            out.std_error[i] = std::sqrt(ss / (M - 1.0) / M);
        }
    }
    return out;
}

}  // namespace jch
