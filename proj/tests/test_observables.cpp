// test_observables.cpp — Site moments, polariton populations and ensemble estimators

#include "jch/hamiltonian.hpp"
#include "jch/observables.hpp"

#include <doctest.h>

#include <cmath>

using namespace jch;

TEST_SUITE("observables") {

TEST_CASE("Fock and polariton product states have zero variance") {
    const SectorFamily fam(LatticeSpec{3, Boundary::open, {}}, 3);
    const auto mott = polariton_product_state(
        fam, {LocalPolariton::lower(1), LocalPolariton::lower(1), LocalPolariton::lower(1)});
    for (int k = 0; k < 3; ++k) {
        const auto m = excitation_moments(mott, k);
        CHECK(m.mean == doctest::Approx(1.0));
        CHECK(std::abs(m.variance) < 1e-14);
        CHECK(polariton_population(mott, k, 1, Branch::minus) == doctest::Approx(1.0));
        CHECK(std::abs(polariton_population(mott, k, 1, Branch::plus)) < 1e-14);
        CHECK(std::abs(ground_population(mott, k)) < 1e-14);
    }
}

TEST_CASE("delocalized photon") {
    const auto s = make_sector(LatticeSpec{2, Boundary::open, {}}, 1);
    const std::vector<SiteConfig> left{{1, false}, {0, false}};
    const std::vector<SiteConfig> right{{0, false}, {1, false}};
    QuantumState psi{s, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(s->dimension()))};
    psi.amplitudes[static_cast<Eigen::Index>(*s->index_of(left))] = 1.0 / std::sqrt(2.0);
    psi.amplitudes[static_cast<Eigen::Index>(*s->index_of(right))] = 1.0 / std::sqrt(2.0);
    const auto m = excitation_moments(psi, 0);
    CHECK(m.mean == doctest::Approx(0.5));
    CHECK(m.variance == doctest::Approx(0.25));
    CHECK(ground_population(psi, 1) == doctest::Approx(0.5));
    // |g,1> = (|1+> + |1->)/sqrt(2) on the occupied site.
    CHECK(polariton_population(psi, 0, 1, Branch::minus) == doctest::Approx(0.25));
    CHECK(polariton_population(psi, 0, 1, Branch::plus) == doctest::Approx(0.25));

    const auto N0 = build_site_excitation_number(s, 0);
    CHECK(psi.amplitudes.dot(N0.apply(psi.amplitudes)).real() == doctest::Approx(m.mean));
}

TEST_CASE("population above the cutoff keeps only the atomic component") {
    const auto s = make_sector(LatticeSpec{1, Boundary::open, 1}, 2);
    REQUIRE(s->dimension() == 1);  // only |e,1>
    const auto psi = basis_state(s, 0);
    CHECK(polariton_population(psi, 0, 2, Branch::minus) == doctest::Approx(0.5));
    CHECK_THROWS_AS(polariton_population(psi, 0, 3, Branch::minus), std::invalid_argument);
}

TEST_CASE("middle site and fidelity") {
    CHECK(middle_site(1) == 0);
    CHECK(middle_site(3) == 1);
    CHECK(middle_site(4) == 1);
    CHECK(middle_site(7) == 3);
    const auto s = make_sector(LatticeSpec{2, Boundary::open, {}}, 1);
    const auto a = basis_state(s, 0);
    const auto b = basis_state(s, 1);
    CHECK(fidelity(a, a) == doctest::Approx(1.0));
    CHECK(fidelity(a, b) == 0.0);
    const auto c = basis_state(make_sector(LatticeSpec{2, Boundary::open, {}}, 2), 0);
    CHECK_THROWS_AS(fidelity(a, c), std::invalid_argument);
}

TEST_CASE("ensemble estimators distinguish trajectory and mixed-state variance") {
    const auto s0 = make_sector(LatticeSpec{1, Boundary::open, {}}, 0);
    const auto s2 = make_sector(LatticeSpec{1, Boundary::open, {}}, 2);
    const std::vector<SiteConfig> two{{2, false}};
    const std::vector<QuantumState> samples{basis_state(s0, 0), basis_state(s2, *s2->index_of(two))};
    const auto v = ensemble_excitation_variance(samples, 0);
    CHECK(v.trajectory_mean == 0.0);
    CHECK(v.trajectory_stderr == 0.0);
    CHECK(v.mixed_state == doctest::Approx(1.0));
    CHECK_THROWS_AS(ensemble_excitation_variance({}, 0), std::invalid_argument);
}

}
