#include "crnet/errors.hpp"
#include "crnet/evolution.hpp"
#include "crnet/oracle.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace crnet;

namespace {

// exp(-iHt) psi by truncated Taylor series over short steps.
Eigen::VectorXcd taylor_evolve(const SparseMatrixC& h, Eigen::VectorXcd psi, double t) {
    double norm1 = 0.0;
    for (int k = 0; k < h.outerSize(); ++k) {
        double col = 0.0;
        for (SparseMatrixC::InnerIterator it(h, k); it; ++it)
            col += std::abs(it.value());
        norm1 = std::max(norm1, col);
    }
    const int steps = std::max(1, static_cast<int>(std::ceil(norm1 * std::abs(t) / 0.25)));
    const double dt = t / steps;
    for (int s = 0; s < steps; ++s) {
        Eigen::VectorXcd term = psi;
        Eigen::VectorXcd sum = psi;
        for (int k = 1; k <= 30; ++k) {
            term = (h * term) * cplx(0.0, -dt / k);
            sum += term;
        }
        psi = sum;
    }
    return psi;
}

FockVector random_fock(std::mt19937_64& rng, int cutoff) {
    std::normal_distribution<double> normal;
    Eigen::VectorXcd c(cutoff);
    for (int n = 0; n < cutoff; ++n)
        c(n) = cplx(normal(rng), normal(rng));
    return FockVector::normalized(c);
}

}  // namespace

TEST_CASE("Fock space indexing") {
    const FockSpace space(3, 2);
    CHECK(space.dim() == 27);
    for (long i = 0; i < space.dim(); ++i)
        CHECK(space.index(space.occupations(i)) == i);
    CHECK(space.index({0, 0, 1}) == 1);
    CHECK(space.index({1, 0, 0}) == 9);
    CHECK_THROWS_AS(space.index({3, 0, 0}), InputError);
    CHECK_THROWS_AS(FockSpace(20, 3), InputError);
    CHECK_THROWS_AS(FockSpace(0, 3), InputError);
}

TEST_CASE("Hamiltonian") {
    SUBCASE("single mode") {
        const CouplingMatrix c{1, Eigen::MatrixXd::Zero(1, 1), FamilyTag{}, std::nullopt, std::nullopt};
        const FockSpace space(1, 2);
        const Eigen::MatrixXcd h(build_hamiltonian(c, 1.5, space));
        CHECK((h - Eigen::Vector3cd(0, 1.5, 3.0).asDiagonal().toDenseMatrix()).norm() < 1e-15);
    }
    SUBCASE("two modes, one excitation") {
        const auto c = coupling_from_graph(path_graph(2), 0.7);
        const FockSpace space(2, 1);
        const Eigen::MatrixXcd h(build_hamiltonian(c, 2.0, space));
        const long a = space.index({1, 0}), b = space.index({0, 1});
        CHECK(h(a, a) == cplx(2.0, 0));
        CHECK(h(b, b) == cplx(2.0, 0));
        CHECK(h(a, b) == cplx(0.7, 0));
        CHECK(h(b, a) == cplx(0.7, 0));
        CHECK(h(0, 0) == cplx(0, 0));
    }
    SUBCASE("Hermitian with sqrt(n) matrix elements") {
        const auto c = engineered_chain(3, 1.3);
        const FockSpace space(3, 3);
        const Eigen::MatrixXcd h(build_hamiltonian(c, 0.4, space));
        CHECK((h - h.adjoint()).norm() < 1e-14);
        // a_0^dag a_1 |1,2,0> = sqrt(2) sqrt(2) |2,1,0>
        CHECK(std::abs(h(space.index({2, 1, 0}), space.index({1, 2, 0})) - 2.0 * c.k(0, 1)) < 1e-14);
    }
}

TEST_CASE("exact evolution") {
    const auto c = engineered_chain(3, 1.0);
    const FockSpace space(3, 2);
    const SparseMatrixC h = build_hamiltonian(c, 0.3, space);
    std::mt19937_64 rng(4);
    NetworkState s{{random_fock(rng, 3), random_fock(rng, 3), FockVector::vacuum(3)}};
    const Eigen::VectorXcd psi0 = product_state(space, s);
    CHECK((evolve_exact(h, psi0, 0.0) - psi0).norm() < 1e-14);

    for (double t : {0.4, 1.7, 5.0}) {
        const Eigen::VectorXcd psi = evolve_exact(h, psi0, t);
        CHECK((psi - taylor_evolve(h, psi0, t)).norm() < 1e-10);
        CHECK(photon_number(space, psi) ==
              doctest::Approx(photon_number(space, psi0)).epsilon(1e-10));
    }
    CHECK_THROWS_AS(evolve_exact(h, Eigen::VectorXcd::Ones(3), 1.0), InputError);
}

TEST_CASE("Krylov path agrees with series evolution") {
    const auto c = engineered_chain(4, 1.0);
    const FockSpace space(4, 6);
    REQUIRE(space.dim() > dense_evolution_limit);
    const SparseMatrixC h = build_hamiltonian(c, 0.5, space);
    std::mt19937_64 rng(8);
    NetworkState s{{random_fock(rng, 3), FockVector::vacuum(3), random_fock(rng, 3),
                    FockVector::vacuum(3)}};
    const Eigen::VectorXcd psi0 = product_state(space, s);
    const double tau = std::numbers::pi;
    const Eigen::VectorXcd psi = evolve_exact(h, psi0, tau);
    CHECK((psi - taylor_evolve(h, psi0, tau)).norm() < 1e-9);

    // and with the mirror prediction at the transfer time
    const cplx p0 = deterministic_phase(0.5, tau, mirror_phase_power(c.family));
    const Eigen::VectorXcd predicted = product_state(space, mirror_fock(s, p0));
    CHECK(std::abs(predicted.dot(psi) - 1.0) < 1e-9);
}

TEST_CASE("brute force agrees with the mirror map") {
    SUBCASE("N = 2 truncated coherent input") {
        const cplx alpha(0.6, 0.3);
        const auto tc = truncated_coherent(alpha, 3);
        CHECK(tc.tail_mass > 0.0);
        CHECK(tc.tail_mass < 1e-2);
        const auto c = coupling_from_graph(path_graph(2), 1.0);
        const double tau = optimal_time(c.family, 1.0);
        const FockSpace space(2, 3);
        NetworkState s{{tc.state, FockVector::vacuum(4)}};
        const Eigen::VectorXcd psi =
            evolve_exact(build_hamiltonian(c, 0.0, space), product_state(space, s), tau);
        const cplx p0 = deterministic_phase(0.0, tau, mirror_phase_power(c.family));
        CHECK(std::abs(p0 - cplx(0, 1)) < 1e-15);
        const Eigen::VectorXcd predicted = product_state(space, mirror_fock(s, p0));
        CHECK(std::abs(predicted.dot(psi) - 1.0) < 1e-10);
    }
    SUBCASE("three-node chain, one photon picks up -1") {
        const auto c = engineered_chain(3, 1.0);
        const FockSpace space(3, 1);
        const Eigen::VectorXcd psi = evolve_exact(build_hamiltonian(c, 0.0, space),
                                                  product_state(space, NetworkState{{
                                                      FockVector(Eigen::VectorXcd::Unit(2, 1)),
                                                      Vacuum{}, Vacuum{}}}),
                                                  std::numbers::pi);
        CHECK(std::abs(psi(space.index({0, 0, 1})) - cplx(-1, 0)) < 1e-10);
    }
    SUBCASE("random Fock inputs on hypercubes and chains") {
        std::mt19937_64 rng(17);
        for (int trial = 0; trial < 6; ++trial) {
            const bool chain = trial % 2 == 0;
            const auto c = chain ? engineered_chain(3, 0.9) : coupling_from_graph(path_graph(2), 1.2);
            const double omega = 0.25 * trial;
            const double tau = optimal_time(c.family, chain ? 0.9 : 1.2);
            const int n = c.n_nodes;
            NetworkState s;
            for (int u = 0; u < n; ++u)
                s.nodes.push_back(random_fock(rng, 3));
            const FockSpace space(n, 2 * n);
            const Eigen::VectorXcd psi =
                evolve_exact(build_hamiltonian(c, omega, space), product_state(space, s), tau);
            const cplx p0 = deterministic_phase(omega, tau, mirror_phase_power(c.family));
            const Eigen::VectorXcd predicted = product_state(space, mirror_fock(s, p0));
            CHECK(std::abs(predicted.dot(psi) - 1.0) < 1e-8);
        }
    }
}

TEST_CASE("coherent truncation") {
    CHECK(coherent_cutoff(cplx(0, 0)) == 8);
    CHECK(coherent_cutoff(cplx(3, 4)) == 73);
    const auto tc = truncated_coherent(cplx(1.0, 0.0), 40);
    CHECK(tc.tail_mass < 1e-15);
    CHECK(tc.state.coeffs()(2).real() ==
          doctest::Approx(std::exp(-0.5) / std::sqrt(2.0)).epsilon(1e-13));
    CHECK_THROWS_AS(truncated_coherent(cplx(1, 0), -1), InputError);
}

TEST_CASE("discrete-mode dephasing oracle") {
    const BathSpec d{DiscreteBath{{{std::log(2.0), 0.04}, {std::log(1.5), 0.03}}}, 1.0};
    CHECK(discrete_dephasing_exact(0, d, 1.0, 1.0) == 1.0);

    SUBCASE("<n> = 1 mode by hand") {
        const BathSpec one{DiscreteBath{{{std::log(2.0), 0.1}}}, 1.0};
        const double beta_sq = 0.1 * eta_abs_sq(std::log(2.0), 0.8);
        CHECK(discrete_dephasing_exact(1, one, 0.8, 1.0) ==
              doctest::Approx(std::exp(-1.5 * beta_sq)).epsilon(1e-14));
    }
    SUBCASE("zero temperature is the vacuum factor") {
        CHECK(discrete_dephasing_exact(2, d, 1.3, 0.0) ==
              doctest::Approx(vacuum_factor(d, 2, 1.3)).epsilon(1e-13));
    }
    SUBCASE("matches the factorized table on random mode lists") {
        std::mt19937_64 rng(31);
        std::uniform_real_distribution<double> w(0.05, 5.0), xi(0.0, 0.2), tau(0.1, 4.0);
        for (int trial = 0; trial < 30; ++trial) {
            DiscreteBath b;
            for (int j = 0; j < 1 + trial % 7; ++j)
                b.modes.push_back({w(rng), xi(rng)});
            const BathSpec spec{b, 0.7};
            const double t = tau(rng);
            for (int dn : {1, 2, 3})
                for (double temp : {0.0, 0.5, 2.0}) {
                    const double factored =
                        vacuum_factor(spec, dn, t) * thermal_factor(spec, dn, t, temp);
                    CHECK(std::abs(discrete_dephasing_exact(dn, spec, t, temp) - factored) < 1e-12);
                }
        }
    }
    CHECK_THROWS_AS(discrete_dephasing_exact(1, BathSpec{OhmicBath{}, 1.0}, 1.0, 1.0), InputError);
}
