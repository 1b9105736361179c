// test_trajectories.cpp — Quantum-jump unraveling, seeding and tabulated drifts

#include "jch/observables.hpp"
#include "jch/solvers.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <set>

using namespace jch;

namespace {

std::vector<double> grid(double t1, int n) {
    std::vector<double> t(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) t[static_cast<std::size_t>(i)] = t1 * i / (n - 1);
    return t;
}

std::vector<TrajectoryRecord> run(const OpenSystem& sys, const QuantumState& psi0, const std::vector<double>& times,
                                  int M, std::uint64_t base) {
    std::vector<TrajectoryRecord> out;
    for (int j = 0; j < M; ++j) out.push_back(quantum_trajectory(sys, psi0, times, trajectory_seed(base, j)));
    return out;
}

}  // namespace

TEST_SUITE("trajectories") {

TEST_CASE("seeds are deterministic and distinct") {
    CHECK(trajectory_seed(5, 9) == trajectory_seed(5, 9));
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i) seen.insert(trajectory_seed(42, i));
    CHECK(seen.size() == 1000);
    CHECK(trajectory_seed(1, 0) != trajectory_seed(2, 0));
}

TEST_CASE("a trajectory is reproducible from its seed") {
    ModelParams p;
    p.hop_A = 0.1;
    p.kappa = 0.05;
    p.gamma = 0.02;
    const SectorFamily fam(LatticeSpec{2, Boundary::open, {}}, 2);
    const auto psi0 = polariton_product_state(fam, {LocalPolariton::lower(1), LocalPolariton::lower(1)});
    const auto sys = make_open_system(fam, p);
    const auto times = grid(60.0, 13);
    const auto a = quantum_trajectory(sys, psi0, times, 1234);
    const auto b = quantum_trajectory(sys, psi0, times, 1234);
    REQUIRE(a.jumps.size() == b.jumps.size());
    for (std::size_t i = 0; i < a.jumps.size(); ++i) {
        CHECK(a.jumps[i].time == b.jumps[i].time);
        CHECK(a.jumps[i].label == b.jumps[i].label);
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
        CHECK(a.samples[i].total_excitations() == b.samples[i].total_excitations());
        CHECK((a.samples[i].amplitudes - b.samples[i].amplitudes).norm() == 0.0);
        CHECK(a.samples[i].norm() == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("jumps lower the excitation number and carry channel labels") {
    ModelParams p;
    p.g = 0.0;
    p.kappa = 1.0;
    const SectorFamily fam(LatticeSpec{1, Boundary::open, {}}, 2);
    const auto s2 = fam.sector(2);
    const std::vector<SiteConfig> two{{2, false}};
    const auto psi0 = basis_state(s2, *s2->index_of(two));
    const auto rec = quantum_trajectory(make_open_system(fam, p), psi0, {0.0, 50.0}, 77);
    REQUIRE(rec.jumps.size() == 2);
    CHECK(rec.jumps[0].label == "cavity[0]");
    CHECK(rec.jumps[0].from_total == 2);
    CHECK(rec.jumps[1].from_total == 1);
    CHECK(rec.jumps[0].time < rec.jumps[1].time);
    CHECK(rec.samples.back().total_excitations() == 0);
}

TEST_CASE("photon decay follows the exponential law") {
    ModelParams p;
    p.g = 0.0;
    p.kappa = 0.5;
    const SectorFamily fam(LatticeSpec{1, Boundary::open, {}}, 1);
    const auto s1 = fam.sector(1);
    const std::vector<SiteConfig> one{{1, false}};
    const auto psi0 = basis_state(s1, *s1->index_of(one));
    const auto sys = make_open_system(fam, p);
    const auto times = grid(6.0, 7);
    const int M = 1000;
    const auto recs = run(sys, psi0, times, M, 99);
    const auto e = ensemble_average(recs, [](const QuantumState& s) { return double(s.total_excitations()); });
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double q = std::exp(-p.kappa * times[i]);
        CHECK(std::abs(e.mean[i] - q) <= 3.0 * std::sqrt(q * (1 - q) / M) + 1e-12);
    }
    double mean_wait = 0.0;
    int jumped = 0;
    for (const auto& r : recs)
        if (!r.jumps.empty()) { mean_wait += r.jumps[0].time; ++jumped; }
    // Exponential waiting time truncated at t = 6: mean 1/kappa - 6 e^{-3}/(1 - e^{-3}).
    const double expected = 1.0 / p.kappa - 6.0 * std::exp(-3.0) / (1.0 - std::exp(-3.0));
    CHECK(mean_wait / jumped == doctest::Approx(expected).epsilon(0.08));
}

TEST_CASE("JC cell ensemble against the no-jump propagator") {
    // With one excitation every jump ends in |g,0>, so P(e,0)(t) is the
    // |e,0> weight of exp(-i H_eff t)|g,1> without renormalization.
    ModelParams p;
    p.kappa = 0.2;
    p.gamma = 0.1;
    ref::Mat Heff(2, 2);  // basis {|g,1>, |e,0>}
    Heff << std::complex<double>(0, -p.kappa / 2), p.g, p.g, std::complex<double>(p.detuning, -p.gamma / 2);
    Eigen::ComplexEigenSolver<ref::Mat> es(Heff);
    const auto times = grid(20.0, 9);

    const SectorFamily fam(LatticeSpec{1, Boundary::open, {}}, 1);
    const auto s1 = fam.sector(1);
    const std::vector<SiteConfig> g1{{1, false}};
    const std::vector<SiteConfig> e0{{0, true}};
    const auto ie = static_cast<Eigen::Index>(*s1->index_of(e0));
    const auto psi0 = basis_state(s1, *s1->index_of(g1));
    auto sys = make_open_system(fam, p);
    tabulate_drifts(sys, times);
    const auto recs = run(sys, psi0, times, 2000, 5);
    const auto e = ensemble_average(recs, [ie](const QuantumState& s) {
        return s.total_excitations() == 1 ? std::norm(s.amplitudes[ie]) : 0.0;
    });
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Eigen::VectorXcd ph =
            (std::complex<double>(0, -times[i]) * es.eigenvalues()).array().exp();
        const ref::Mat U = es.eigenvectors() * ph.asDiagonal() * es.eigenvectors().inverse();
        const double expected = std::norm(U(1, 0));
        CHECK(std::abs(e.mean[i] - expected) <= 3.0 * e.std_error[i] + 1e-12);
    }
}

TEST_CASE("tabulated drifts reproduce the Krylov path") {
    ModelParams p;
    p.hop_A = 0.1;
    p.kappa = 0.03;
    p.gamma = 0.03;
    RampSchedule r;
    r.delta_start = 1e-3;
    r.delta_end = 10.0;
    r.duration = 2.0;
    const SectorFamily fam(LatticeSpec{2, Boundary::open, {}}, 2);
    const auto psi0 = polariton_product_state(fam, {LocalPolariton::lower(1), LocalPolariton::lower(1)});
    const double T = r.physical_duration(p.hop_A);
    const auto times = grid(T, 5);
    const auto plain = make_open_system(fam, p, r.profile(p.hop_A));
    auto tabled = make_open_system(fam, p, r.profile(p.hop_A));
    tabulate_drifts(tabled, times);
    int with_jumps = 0;
    for (std::uint64_t j = 0; j < 12; ++j) {
        const auto a = quantum_trajectory(plain, psi0, times, trajectory_seed(3, j));
        const auto b = quantum_trajectory(tabled, psi0, times, trajectory_seed(3, j));
        REQUIRE(a.jumps.size() == b.jumps.size());
        with_jumps += !a.jumps.empty();
        for (std::size_t k = 0; k < a.jumps.size(); ++k) {
            CHECK(a.jumps[k].time == doctest::Approx(b.jumps[k].time).epsilon(1e-6));
            CHECK(a.jumps[k].label == b.jumps[k].label);
        }
        for (std::size_t i = 0; i < times.size(); ++i) {
            REQUIRE(a.samples[i].total_excitations() == b.samples[i].total_excitations());
            CHECK(fidelity(a.samples[i], b.samples[i]) > 1.0 - 1e-8);
        }
    }
    CHECK(with_jumps > 0);
}

TEST_CASE("closed systems never jump") {
    ModelParams p;
    const SectorFamily fam(LatticeSpec{3, Boundary::open, {}}, 2);
    const auto psi0 = polariton_product_state(
        fam, {LocalPolariton::lower(1), LocalPolariton::ground(), LocalPolariton::lower(1)});
    const auto sys = make_open_system(fam, p);
    const auto times = grid(500.0, 6);
    const auto rec = quantum_trajectory(sys, psi0, times, 1);
    const auto ref_states = evolve(sys.hamiltonians[2], psi0, times);
    CHECK(rec.jumps.empty());
    for (std::size_t i = 0; i < times.size(); ++i) CHECK(fidelity(rec.samples[i], ref_states[i]) > 1.0 - 1e-8);
}

TEST_CASE("ensemble averages") {
    ModelParams p;
    const SectorFamily fam(LatticeSpec{1, Boundary::open, {}}, 1);
    const auto psi0 = basis_state(fam.sector(1), 0);
    const auto recs = run(make_open_system(fam, p), psi0, {0.0, 1.0}, 5, 1);
    const auto e = ensemble_average(recs, [](const QuantumState&) { return 2.0; });
    CHECK(e.mean == std::vector<double>{2.0, 2.0});
    CHECK(e.std_error == std::vector<double>{0.0, 0.0});
}

}
