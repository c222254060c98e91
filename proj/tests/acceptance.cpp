// Acceptance gate. One line per criterion; nonzero exit if any fails.

#include "crnet/bath.hpp"
#include "crnet/evolution.hpp"
#include "crnet/fidelity.hpp"
#include "crnet/oracle.hpp"
#include "crnet/states.hpp"
#include "crnet/topology.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace crnet;

namespace {

constexpr double swap_tol = 1e-9;
constexpr double runtime_limit_s = 1.0;
constexpr double spectrum_tol = 1e-10;
constexpr double f_rel_tol = 1e-8;
constexpr double vacuum_rel_tol = 1e-8;
constexpr double discrete_rel_tol = 1e-3;
constexpr double oracle_tol = 1e-12;
constexpr double overlap_tol = 1e-8;
constexpr double r_zero_tol = 1e-10;
constexpr double monotone_slack = 1e-12;
constexpr double mc_sigmas = 3.0;
constexpr double roundtrip_tol = 1e-12;

constexpr double pi = std::numbers::pi;

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
    char buf[256];
    std::snprintf(buf, sizeof buf, format, a, b, c);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

FockVector random_fock(std::mt19937_64& rng, int cutoff) {
    std::normal_distribution<double> normal;
    Eigen::VectorXcd c(cutoff);
    for (int n = 0; n < cutoff; ++n)
        c(n) = cplx(normal(rng), normal(rng));
    return FockVector::normalized(c);
}

Outcome hypercube_swap() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int theta : {1, 2})
        for (int g : {1, 2, 3}) {
            const double kappa = 1.0;
            const auto c = coupling_from_graph(cartesian_power(path_graph(theta + 1), g), kappa);
            const double tau = optimal_time(c.family, kappa);
            const auto cert = verify_swap(propagate(decompose(c), tau), i_power(theta * g), swap_tol);
            worst = std::max(worst, cert.max_deviation);
        }
    const double elapsed = seconds_since(start);
    return {worst < swap_tol && elapsed < runtime_limit_s,
            fmt("max deviation %.3g (tol %.0e), %.3f s", worst, swap_tol, elapsed)};
}

Outcome chain_mirror() {
    const auto start = std::chrono::steady_clock::now();
    double worst = 0.0;
    for (int n = 2; n <= 10; ++n) {
        const auto c = engineered_chain(n, 1.0);
        const double tau = optimal_time(c.family, 1.0);
        const auto cert = verify_swap(propagate(decompose(c), tau), i_power(n - 1), swap_tol);
        worst = std::max(worst, cert.max_deviation);
    }
    const double elapsed = seconds_since(start);
    return {worst < swap_tol && elapsed < runtime_limit_s,
            fmt("max deviation %.3g (tol %.0e), %.3f s", worst, swap_tol, elapsed)};
}

Outcome jx_spectrum() {
    double worst = 0.0;
    for (int n = 2; n <= 12; ++n) {
        const auto d = decompose(engineered_chain(n, 1.0));
        for (int k = 0; k < n; ++k)
            worst = std::max(worst, std::abs(d.eigenvalues(k) - (-(n - 1) / 2.0 + k)));
    }
    return {worst < spectrum_tol, fmt("max eigenvalue error %.3g (tol %.0e)", worst, spectrum_tol)};
}

Outcome f_crosscheck() {
    const double gamma = 1.0, cutoff = 1.0;
    const BathSpec spec{OhmicBath{gamma, cutoff}, 1.0};
    double worst = 0.0;
    for (int k = 0; k < 20; ++k) {
        const double t = 0.01 * std::pow(5000.0, k / 19.0);
        const double closed = 2.0 * gamma * (cutoff * t - std::atan(cutoff * t));
        worst = std::max(worst, std::abs(f_number(spec, t) - closed) / closed);
    }
    return {worst < f_rel_tol, fmt("max relative error %.3g over 20 t in [0.01, 50] (tol %.0e)", worst,
                                   f_rel_tol)};
}

Outcome vacuum_factor_check() {
    double worst = 0.0;
    for (double r : {0.3, 1.0})
        for (int dn : {1, 2, 3})
            for (double tau : {0.1, 0.5, 1.0, 2.0, pi}) {
                const double gamma = 1.0, cutoff = 1.0;
                const BathSpec spec{OhmicBath{gamma, cutoff}, r};
                const double closed =
                    std::pow(1.0 + cutoff * cutoff * tau * tau, -gamma * dn * dn * r * r / 2.0);
                const double from_quadrature =
                    std::exp(-dn * dn * r * r * dephasing_weight(spec, tau) / 2.0);
                worst = std::max(worst, std::abs(from_quadrature - closed) / closed);
                worst = std::max(worst, std::abs(vacuum_factor(spec, dn, tau) - closed) / closed);
            }

    const OhmicBath bath{1.0, 1.0};
    const BathSpec continuum{bath, 1.0};
    const BathSpec sampled{discretize_ohmic(bath, 10000, 1e-6, 60.0), 1.0};
    double worst_discrete = 0.0;
    for (int dn : {1, 2})
        for (double tau : {0.5, 1.0, pi}) {
            const double d0 = vacuum_factor(continuum, dn, tau);
            worst_discrete =
                std::max(worst_discrete, std::abs(vacuum_factor(sampled, dn, tau) - d0) / d0);
        }
    return {worst < vacuum_rel_tol && worst_discrete < discrete_rel_tol,
            fmt("quadrature rel %.3g (tol %.0e); 1e4-mode rel %.3g (tol 1e-3)", worst, vacuum_rel_tol,
                worst_discrete)};
}

Outcome dephasing_oracle() {
    std::mt19937_64 rng(606);
    std::uniform_real_distribution<double> w(0.01, 10.0), xi(0.0, 0.5), tau_dist(0.05, 2.0 * pi),
        r_dist(0.1, 1.5);
    std::uniform_int_distribution<int> count(1, 40);
    double worst = 0.0;
    for (int list = 0; list < 50; ++list) {
        DiscreteBath b;
        const int modes = count(rng);
        for (int j = 0; j < modes; ++j)
            b.modes.push_back({w(rng), xi(rng)});
        const BathSpec spec{b, r_dist(rng)};
        const double tau = tau_dist(rng);
        for (int dn : {1, 2, 3})
            for (double temp : {0.0, 0.5, 2.0}) {
                const double factored = vacuum_factor(spec, dn, tau) * thermal_factor(spec, dn, tau, temp);
                worst = std::max(worst,
                                 std::abs(discrete_dephasing_exact(dn, spec, tau, temp) - factored));
            }
    }
    return {worst < oracle_tol, fmt("max abs difference %.3g over 450 cases (tol %.0e)", worst,
                                    oracle_tol)};
}

double brute_force_overlap(const CouplingMatrix& c, double param, double omega, std::mt19937_64& rng) {
    const int cutoff = 3;
    const FockSpace space(c.n_nodes, cutoff);
    NetworkState s;
    s.nodes.push_back(random_fock(rng, cutoff + 1));
    for (int u = 1; u < c.n_nodes; ++u)
        s.nodes.push_back(Vacuum{});
    const double tau = optimal_time(c.family, param);
    const Eigen::VectorXcd exact =
        evolve_exact(build_hamiltonian(c, omega, space), product_state(space, s), tau);
    const cplx p0 = deterministic_phase(omega, tau, mirror_phase_power(c.family));
    const Eigen::VectorXcd predicted = product_state(space, mirror_fock(s, p0));
    return predicted.dot(exact).real();
}

Outcome closed_system_oracle() {
    std::mt19937_64 rng(77);
    double worst = 1.0;
    for (int trial = 0; trial < 5; ++trial) {
        const double omega = 0.4 * trial;
        worst = std::min(worst, brute_force_overlap(engineered_chain(2, 1.3), 1.3, omega, rng));
        worst = std::min(worst, brute_force_overlap(engineered_chain(3, 0.8), 0.8, omega, rng));
    }
    return {worst >= 1.0 - overlap_tol,
            fmt("min Re overlap %.15f (need >= 1 - %.0e)", worst, overlap_tol)};
}

bool monotone(const std::vector<SweepRow>& rows, std::size_t n_lambda, std::size_t n_temp) {
    auto at = [&](std::size_t i, std::size_t j) { return rows[i * n_temp + j].result.value; };
    for (std::size_t i = 0; i < n_lambda; ++i)
        for (std::size_t j = 0; j < n_temp; ++j) {
            if (j > 0 && at(i, j) > at(i, j - 1) + monotone_slack)
                return false;
            if (i > 0 && at(i, j) < at(i - 1, j) - monotone_slack)
                return false;
        }
    return true;
}

Outcome fig2_properties() {
    const std::vector<double> lambdas{1, 2, 4, 8};
    const std::vector<double> temps{0, 0.5, 1, 2, 4};
    bool ok = true;
    int grids = 0;
    for (double r : {0.25, 0.5, 1.0})
        for (int m : {2, 3, 5}) {
            const BathSpec bath{OhmicBath{1.0, 1.0}, r};
            ok = ok && monotone(fidelity_sweep(2, lambdas, temps, bath, m), lambdas.size(), temps.size());
            ++grids;
        }
    double worst_zero = 0.0;
    for (double r : {0.0, 1e-7})
        for (const auto& row : fidelity_sweep(2, lambdas, temps, BathSpec{OhmicBath{1.0, 1.0}, r}, 3))
            worst_zero = std::max(worst_zero, std::abs(row.result.value - 1.0));
    return {ok && worst_zero <= r_zero_tol,
            std::to_string(grids) + " (r, M) grids monotone: " + (ok ? "yes" : "no") +
                fmt("; r -> 0 max |F - 1| = %.3g (tol %.0e)", worst_zero, r_zero_tol)};
}

Outcome haar_vs_mc() {
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    double worst_sigma = 0.0;
    for (int m : {2, 3, 5})
        for (int k = 0; k < 10; ++k) {
            DephasingTable t;
            t.cutoff = m;
            t.d0 = Eigen::MatrixXd::Ones(m, m);
            t.dT = Eigen::MatrixXd::Ones(m, m);
            for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j) {
                    t.d0(i, j) = t.d0(j, i) = u(rng);
                    t.dT(i, j) = t.dT(j, i) = u(rng);
                }
            const auto closed = average_fidelity_haar(t);
            const auto mc = average_fidelity_mc(t, 100000, 1000 * m + k);
            worst_sigma = std::max(worst_sigma, std::abs(mc.value - closed.value) / mc.std_error);
        }
    return {worst_sigma <= mc_sigmas,
            fmt("max |MC - closed| = %.2f standard errors over 30 tables (limit %.0f)", worst_sigma,
                mc_sigmas)};
}

Outcome phase_roundtrip() {
    std::mt19937_64 rng(99);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * pi);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + trial % 8;
        const cplx p0 = std::exp(cplx(0.0, angle(rng)));
        NetworkState coherent, tagged;
        for (int u = 0; u < n; ++u) {
            coherent.nodes.push_back(CoherentAmplitude{cplx(normal(rng), normal(rng))});
            tagged.nodes.push_back(u % 3 == 1 ? NodeState{Vacuum{}} : NodeState{EntangledTag{1 + u % 4}});
        }

        // Twice the same SWAP: positions restored, every amplitude scaled by
        // one common unit-modulus factor.
        const auto twice = apply_swap_coherent(apply_swap_coherent(coherent, p0), p0);
        const cplx common = std::conj(p0) * std::conj(p0);
        for (int u = 0; u < n; ++u) {
            const cplx a = std::get<CoherentAmplitude>(coherent.nodes[u]).alpha;
            worst = std::max(worst, std::abs(std::get<CoherentAmplitude>(twice.nodes[u]).alpha - common * a));
        }
        const auto back = apply_swap_coherent(apply_swap_coherent(coherent, p0), std::conj(p0));
        for (int u = 0; u < n; ++u)
            worst = std::max(worst, std::abs(std::get<CoherentAmplitude>(back.nodes[u]).alpha -
                                             std::get<CoherentAmplitude>(coherent.nodes[u]).alpha));

        const auto g1 = apply_swap_entangled(tagged, p0);
        const auto g2 = apply_swap_entangled(g1.state, p0);
        int photons = 0;
        for (int u = 0; u < n; ++u) {
            if (tagged.nodes[u].index() != g2.state.nodes[u].index())
                worst = 1.0;
            if (const auto* e = std::get_if<EntangledTag>(&tagged.nodes[u])) {
                photons += e->m_photons;
                if (std::get<EntangledTag>(g2.state.nodes[u]).m_photons != e->m_photons)
                    worst = 1.0;
            }
        }
        worst = std::max(worst, std::abs(g1.global_phase * g2.global_phase -
                                         std::pow(std::conj(p0), 2 * photons)));
        worst = std::max(worst, std::abs(std::abs(g1.global_phase * g2.global_phase) - 1.0));
    }
    return {worst < roundtrip_tol, fmt("max amplitude error %.3g over 50 trials (tol %.0e)", worst,
                                       roundtrip_tol)};
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"hypercube perfect SWAP", hypercube_swap},
        {"engineered-chain mirror", chain_mirror},
        {"Jx spectrum", jx_spectrum},
        {"F(t) quadrature vs closed form", f_crosscheck},
        {"vacuum dephasing factor", vacuum_factor_check},
        {"dephasing oracle equivalence", dephasing_oracle},
        {"closed-system brute force", closed_system_oracle},
        {"fidelity sweep properties", fig2_properties},
        {"Haar average vs Monte Carlo", haar_vs_mc},
        {"phase bookkeeping round trip", phase_roundtrip},
    };

    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        Outcome o;
        try {
            o = criteria[k].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("[%s] %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(),
                    o.detail.c_str());
        failures += o.pass ? 0 : 1;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
