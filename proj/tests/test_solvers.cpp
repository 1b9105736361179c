// test_solvers.cpp — Ground states, Krylov/Magnus propagation and detuning ramps

#include "jch/observables.hpp"
#include "jch/solvers.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace jch;

namespace {

ref::Mat random_hermitian(int d, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    ref::Mat M(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) M(i, j) = {n(rng), n(rng)};
    return 0.5 * (M + M.adjoint());
}

SparseOperator sparse_from(const ref::Mat& M) {
    SparseOperator op;
    op.matrix = M.sparseView();
    op.hermitian = true;
    return op;
}

// Classical RK4 on i dpsi/dt = H(t) psi with a fixed fine step.
Eigen::VectorXcd rk4(const std::function<ref::Mat(double)>& H, Eigen::VectorXcd psi, double t1, int steps) {
    const std::complex<double> mi(0.0, -1.0);
    const double h = t1 / steps;
    for (int s = 0; s < steps; ++s) {
        const double t = s * h;
        const Eigen::VectorXcd k1 = mi * (H(t) * psi);
        const Eigen::VectorXcd k2 = mi * (H(t + h / 2) * (psi + h / 2 * k1));
        const Eigen::VectorXcd k3 = mi * (H(t + h / 2) * (psi + h / 2 * k2));
        const Eigen::VectorXcd k4 = mi * (H(t + h) * (psi + h * k3));
        psi += h / 6 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return psi;
}

}  // namespace

TEST_SUITE("solvers") {

TEST_CASE("Lanczos agrees with dense diagonalization") {
    ModelParams p;
    p.detuning = 0.3;
    const auto H = build_hamiltonian(make_sector(LatticeSpec{5, Boundary::open, {}}, 5), p);
    const auto dense = dense_ground_state(H);
    const auto lan = lanczos_ground_state(H);
    CHECK(lan.energy == doctest::Approx(dense.energy).epsilon(1e-12));
    CHECK(lan.residual < 1e-9);
    CHECK(std::norm(dense.vector.dot(lan.vector)) > 1.0 - 1e-10);
}

TEST_CASE("ground energy against the independent dense construction") {
    ModelParams p;
    p.detuning = 1.5;
    p.hop_A = 0.2;
    const auto Href = ref::jch_hamiltonian(2, 2, p.g, p.hop_A, p.detuning, false);
    const auto expected = ref::block_spectrum(Href, ref::product_totals(2, 2), 2)[0];
    const auto gs = ground_state(build_hamiltonian(make_sector(LatticeSpec{2, Boundary::open, {}}, 2), p));
    CHECK(gs.energy == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("uncoupled single-photon band") {
    ModelParams p;
    p.g = 0.0;
    p.detuning = 1.0;
    p.hop_A = 0.1;
    const int n = 6;
    const auto gs = ground_state(build_hamiltonian(make_sector(LatticeSpec{n, Boundary::open, {}}, 1), p));
    CHECK(gs.energy == doctest::Approx(2 * p.hop_A * std::cos(n * std::numbers::pi / (n + 1))).epsilon(1e-12));
}

TEST_CASE("photon cutoff convergence is variational") {
    ModelParams p;
    p.detuning = 10.0;
    const auto e = cutoff_convergence(LatticeSpec{3, Boundary::open, {}}, 3, p, {1, 2, 3});
    REQUIRE(e.size() == 3);
    CHECK(e[1] <= e[0] + 1e-12);
    CHECK(e[2] <= e[1] + 1e-12);
    const auto exact = ground_state(build_hamiltonian(make_sector(LatticeSpec{3, Boundary::open, {}}, 3), p));
    CHECK(e[2] == doctest::Approx(exact.energy).epsilon(1e-12));
}

TEST_CASE("Krylov exponential matches the eigendecomposition") {
    const auto M = random_hermitian(60, 3);
    Eigen::VectorXcd v = Eigen::VectorXcd::Random(60);
    v.normalize();
    auto apply = [&](const Eigen::VectorXcd& x) { return Eigen::VectorXcd(M * x); };
    for (const double t : {0.1, 2.0, 17.0}) {
        const Eigen::VectorXcd got = krylov_expmv(apply, v, t, 1e-11, 30);
        CHECK((got - ref::unitary(M, t) * v).norm() < 1e-8);
    }
}

TEST_CASE("constant evolution on the spectral and Krylov paths") {
    const auto M = random_hermitian(40, 5);
    const auto H = TimeDependentOperator::constant(sparse_from(M));
    Eigen::VectorXcd v = Eigen::VectorXcd::Random(40);
    v.normalize();
    const std::vector<double> times{0.0, 0.7, 3.0, 9.5};
    EvolveOptions spectral;
    EvolveOptions krylov;
    krylov.spectral_threshold = 0;
    const auto a = evolve(H, v, times, spectral);
    const auto b = evolve(H, v, times, krylov);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const Eigen::VectorXcd exact = ref::unitary(M, times[i]) * v;
        CHECK((a[i] - exact).norm() < 1e-10);
        CHECK((b[i] - exact).norm() < 1e-7);
    }
}

TEST_CASE("Magnus stepping for a scaled generator") {
    // H(t) = f(t) H0 commutes with itself, so U = exp(-i F(t) H0).
    const auto H0 = random_hermitian(12, 7);
    TimeDependentOperator H;
    H.terms.push_back({sparse_from(H0), [](double t) { return 1.0 + 0.5 * std::sin(t); }});
    Eigen::VectorXcd v = Eigen::VectorXcd::Random(12);
    v.normalize();
    const std::vector<double> times{1.0, 4.0, 10.0};
    const auto out = evolve(H, v, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        const double F = times[i] + 0.5 * (1.0 - std::cos(times[i]));
        CHECK((out[i] - ref::unitary(H0, F) * v).norm() < 1e-7);
    }
}

TEST_CASE("Magnus stepping for a non-commuting sweep") {
    // Landau-Zener type H(t) = (t - 3) Z + X against fine-step RK4.
    ref::Mat Z(2, 2), X(2, 2);
    Z << 1, 0, 0, -1;
    X << 0, 1, 1, 0;
    TimeDependentOperator H;
    H.terms.push_back({sparse_from(Z), [](double t) { return t - 3.0; }});
    H.terms.push_back({sparse_from(X), {}});
    Eigen::VectorXcd v(2);
    v << 1, 0;
    EvolveOptions o;
    o.tolerance = 1e-11;
    o.spectral_threshold = 0;
    const auto out = evolve(H, v, {6.0}, o);
    const auto expected = rk4([&](double t) { ref::Mat m = (t - 3.0) * Z + X; return m; }, v, 6.0, 60000);
    CHECK((out[0] - expected).norm() < 1e-8);
}

TEST_CASE("ramp profile endpoints and shapes") {
    RampSchedule r;
    r.delta_start = 1e-3;
    r.delta_end = 1e2;
    r.duration = 10.0;
    const double A = 0.01;
    const double T = r.physical_duration(A);
    CHECK(T == doctest::Approx(1000.0));
    for (const auto shape : {RampShape::linear_in_log, RampShape::smooth_step}) {
        r.shape = shape;
        const auto f = r.profile(A);
        CHECK(f(0.0) == doctest::Approx(1e-3));
        CHECK(f(T) == doctest::Approx(1e2));
        CHECK(f(T / 2) == doctest::Approx(std::sqrt(1e-3 * 1e2)));
        double prev = 0.0;
        for (int i = 0; i <= 50; ++i) {
            const double d = f(T * i / 50.0);
            CHECK(d >= prev);
            prev = d;
        }
    }
    r.delta_start = 0.0;
    CHECK(r.profile(A)(0.0) == doctest::Approx(RampSchedule::log_floor));
    CHECK(ramp_shape_from_string(to_string(RampShape::smooth_step)) == RampShape::smooth_step);
}

TEST_CASE("adiabatic ramp from the Mott state into the superfluid") {
    // Reference overlaps from an independent dense integration of the same
    // schedule started in the ground state at 1e-3 g: 0.7795 at T = 10/A and
    // 0.962 at T = 20/A (smooth step).
    ModelParams p;
    p.detuning = 1e-3;
    const auto sector = make_sector(LatticeSpec{3, Boundary::open, {}}, 3);
    const auto psi0 = ground_state_of(build_hamiltonian(sector, p));
    RampSchedule r;
    r.delta_start = 1e-3;
    r.delta_end = 1e2;
    EvolveOptions o;
    o.tolerance = 1e-8;
    r.duration = 10.0;
    const auto short_ramp = adiabatic_ramp(sector, p, r, psi0, o);
    CHECK(short_ramp.ground_overlap == doctest::Approx(0.7795).epsilon(2e-3));
    CHECK(short_ramp.final_detuning == doctest::Approx(1e2));
    r.duration = 20.0;
    CHECK(adiabatic_ramp(sector, p, r, psi0, o).ground_overlap > 0.9);
}

}

TEST_SUITE("solvers") {

TEST_CASE("resonant ground state is close to the polariton Mott product") {
    ModelParams p;
    const SectorFamily fam(LatticeSpec{3, Boundary::open, {}}, 3);
    const auto mott = polariton_product_state(
        fam, {LocalPolariton::lower(1), LocalPolariton::lower(1), LocalPolariton::lower(1)});
    const auto gs = ground_state_of(build_hamiltonian(mott.sector, p));
    CHECK(fidelity(gs, mott) > 0.99);
}

TEST_CASE("a constant schedule leaves the ground state in place") {
    ModelParams p;
    p.detuning = 0.5;
    const auto sector = make_sector(LatticeSpec{3, Boundary::open, {}}, 3);
    const auto psi0 = ground_state_of(build_hamiltonian(sector, p));
    RampSchedule r;
    r.delta_start = r.delta_end = 0.5;
    r.duration = 1.0;
    const auto out = adiabatic_ramp(sector, p, r, psi0);
    CHECK(fidelity(out.state, psi0) == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(out.ground_overlap == doctest::Approx(1.0).epsilon(1e-8));
}

}

// Adiabaticity figures quoted for T = 10/A. The independent dense
// integration gives 0.78 (one way) and 0.67 (round trip), below both quoted
// thresholds, so this suite is expected to fail.
TEST_SUITE("ramp_claims") {

TEST_CASE("one-way ramp over T = 10/A reaches overlap 0.9") {
    ModelParams p;
    p.detuning = 0.0;
    const auto sector = make_sector(LatticeSpec{3, Boundary::open, {}}, 3);
    const auto psi0 = ground_state_of(build_hamiltonian(sector, p));
    RampSchedule r;
    r.delta_start = 0.0;
    r.delta_end = 1e2;
    r.duration = 10.0;
    CHECK(adiabatic_ramp(sector, p, r, psi0).ground_overlap > 0.9);
}

TEST_CASE("round trip over 2T returns to the Mott state with overlap 0.8") {
    ModelParams p;
    p.detuning = 0.0;
    const auto sector = make_sector(LatticeSpec{3, Boundary::open, {}}, 3);
    const auto psi0 = ground_state_of(build_hamiltonian(sector, p));
    RampSchedule up;
    up.delta_start = 0.0;
    up.delta_end = 1e2;
    up.duration = 10.0;
    RampSchedule down = up;
    down.delta_start = 1e2;
    down.delta_end = 0.0;
    const auto there = adiabatic_ramp(sector, p, up, psi0);
    const auto back = adiabatic_ramp(sector, p, down, there.state);
    CHECK(fidelity(back.state, psi0) > 0.8);
}

}
