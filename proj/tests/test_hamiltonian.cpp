// test_hamiltonian.cpp — Sector Hamiltonians, collapse operators and polariton states

#include "jch/hamiltonian.hpp"
#include "reference.hpp"

#include <doctest.h>

#include <Eigen/Eigenvalues>

using namespace jch;

namespace {

Eigen::VectorXd spectrum(const SparseOperator& H) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(H.to_dense(), Eigen::EigenvaluesOnly).eigenvalues();
}

}  // namespace

TEST_SUITE("hamiltonian") {

TEST_CASE("sector spectra match an independent Kronecker-product construction") {
    struct Case { int n; int nmax; bool periodic; double delta; };
    for (const auto c : {Case{2, 2, false, 0.0}, Case{3, 1, false, 0.37}, Case{3, 1, true, -0.2}, Case{4, 1, true, 0.1}}) {
        ModelParams p;
        p.hop_A = 0.013;
        p.detuning = c.delta;
        const LatticeSpec lat{c.n, c.periodic ? Boundary::periodic : Boundary::open, c.nmax};
        const auto Href = ref::jch_hamiltonian(c.n, c.nmax, p.g, p.hop_A, p.detuning, c.periodic);
        const auto totals = ref::product_totals(c.n, c.nmax);
        for (int m = 0; m <= c.n * (c.nmax + 1); ++m) {
            const auto H = build_hamiltonian(make_sector(lat, m), p);
            const auto expected = ref::block_spectrum(Href, totals, m);
            REQUIRE(spectrum(H).size() == expected.size());
            CHECK((spectrum(H) - expected).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("single cell levels") {
    for (const double delta : {0.0, 0.3, -1.7}) {
        ModelParams p;
        p.detuning = delta;
        for (int n = 1; n <= 4; ++n) {
            const auto ev = spectrum(build_hamiltonian(make_sector(LatticeSpec{1, Boundary::open, {}}, n), p));
            REQUIRE(ev.size() == 2);
            CHECK(ev[0] == doctest::Approx(single_cell_level(n, Branch::minus, delta)).epsilon(1e-13));
            CHECK(ev[1] == doctest::Approx(single_cell_level(n, Branch::plus, delta)).epsilon(1e-13));
        }
    }
    ModelParams p;
    CHECK(polariton_energy(4, Branch::minus, p) == doctest::Approx(-2.0));
    p.detuning = 0.1;
    CHECK_THROWS_AS(polariton_energy(1, Branch::minus, p), std::invalid_argument);
}

TEST_CASE("dispersive shift approximates the far-detuned lower level") {
    for (int n = 1; n <= 3; ++n)
        CHECK(-single_cell_level(n, Branch::minus, 100.0) ==
              doctest::Approx(dispersive_shift(n - 1, 100.0)).epsilon(1e-3));
}

TEST_CASE("hermiticity, lab frame shift and detuning decomposition") {
    ModelParams p;
    p.detuning = 0.25;
    const auto sector = make_sector(LatticeSpec{3, Boundary::periodic, {}}, 3);
    const auto H = build_hamiltonian(sector, p);
    CHECK(H.hermitian);
    CHECK(H.hermiticity_defect() == 0.0);
    const auto lab = spectrum(build_hamiltonian(sector, p, Frame::lab));
    CHECK((lab - spectrum(H) - Eigen::VectorXd::Constant(lab.size(), 3 * p.omega_d)).cwiseAbs().maxCoeff() < 1e-9);

    const auto parts = build_hamiltonian_parts(sector, p);
    const Eigen::MatrixXcd sum = parts.detuning_free.to_dense() + p.detuning * parts.atom_number.to_dense();
    CHECK((sum - H.to_dense()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("collapse operators") {
    ModelParams p;
    p.kappa = 0.04;
    p.gamma = 0.09;
    const SectorFamily fam(LatticeSpec{2, Boundary::open, {}}, 2);
    const auto ops = build_collapse_operators(fam, 2, p);
    CHECK(ops.size() == 4);
    CHECK(ops[0].label() == "cavity[0]");
    CHECK(build_collapse_operators(fam, 0, p).empty());
    p.gamma = 0.0;
    CHECK(build_collapse_operators(fam, 2, p).size() == 2);

    // |g,2>|g,0> --a_0--> sqrt(kappa * 2) |g,1>|g,0>
    const auto s2 = fam.sector(2);
    const auto s1 = fam.sector(1);
    const std::vector<SiteConfig> from{{2, false}, {0, false}};
    const std::vector<SiteConfig> to{{1, false}, {0, false}};
    const auto a0 = build_collapse_operators(fam, 2, p)[0];
    CHECK(a0.op.rows() == s1->dimension());
    CHECK(a0.op.cols() == s2->dimension());
    const auto x = basis_state(s2, *s2->index_of(from));
    const Eigen::VectorXcd y = a0.op.apply(x.amplitudes);
    CHECK(std::abs(y[static_cast<Eigen::Index>(*s1->index_of(to))] - std::sqrt(2 * 0.04)) < 1e-15);
    CHECK(y.norm() == doctest::Approx(std::sqrt(2 * 0.04)));
}

TEST_CASE("polariton product states") {
    const SectorFamily fam(LatticeSpec{1, Boundary::open, {}}, 3);
    ModelParams p;
    for (int n = 1; n <= 3; ++n) {
        const auto psi = polariton_product_state(fam, {LocalPolariton::lower(n)});
        CHECK(psi.norm() == doctest::Approx(1.0));
        const auto H = build_hamiltonian(psi.sector, p);
        const Eigen::VectorXcd r = H.apply(psi.amplitudes) - polariton_energy(n, Branch::minus, p) * psi.amplitudes;
        CHECK(r.norm() < 1e-14);
    }
    const SectorFamily chain(LatticeSpec{3, Boundary::open, {}}, 3);
    const auto psi = polariton_product_state(
        chain, {LocalPolariton::lower(1), LocalPolariton::ground(), LocalPolariton::upper(2)});
    CHECK(psi.total_excitations() == 3);
    CHECK(psi.norm() == doctest::Approx(1.0));
    CHECK_THROWS_AS(polariton_product_state(chain, {LocalPolariton::lower(1)}), std::invalid_argument);
}

TEST_CASE("parameter validation") {
    ModelParams p;
    p.hop_A = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.kappa = -1.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = {};
    p.g = 0.0;
    CHECK_NOTHROW(p.validate());
}

}
