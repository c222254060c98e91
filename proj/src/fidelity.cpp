#include "crnet/fidelity.hpp"

#include "crnet/errors.hpp"
#include "crnet/evolution.hpp"
#include "crnet/topology.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace crnet {

namespace {

FidelityParameters table_parameters(const DephasingTable& table) {
    FidelityParameters p;
    p.temperature = table.temperature;
    p.m = table.cutoff;
    return p;
}

void check_table(const DephasingTable& table) {
    if (table.cutoff < 1 || table.d0.rows() != table.cutoff || table.d0.cols() != table.cutoff ||
        table.dT.rows() != table.cutoff || table.dT.cols() != table.cutoff)
        throw InputError("malformed dephasing table");
}

}  // namespace

std::string to_string(FidelityMethod m) {
    switch (m) {
        case FidelityMethod::haar_closed_form: return "haar_closed_form";
        case FidelityMethod::monte_carlo: return "monte_carlo";
        case FidelityMethod::fixed_input: return "fixed_input";
    }
    return "unknown";
}

FidelityResult average_fidelity_haar(const DephasingTable& table) {
    check_table(table);
    const Eigen::MatrixXd d = table.total();
    const double m = table.cutoff;
    const double overlap = (d.sum() + d.trace()) / (m * (m + 1.0));

    FidelityResult r;
    r.value = std::sqrt(std::clamp(overlap, 0.0, 1.0));
    r.method = FidelityMethod::haar_closed_form;
    r.parameters = table_parameters(table);
    return r;
}

FidelityResult average_fidelity_mc(const DephasingTable& table, long samples, std::uint64_t seed) {
    check_table(table);
    if (samples < 100)
        throw InputError("Monte Carlo fidelity needs at least 100 samples");

    const Eigen::MatrixXd d = table.total();
    const int m = table.cutoff;
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);

    Eigen::VectorXd p(m);
    double mean = 0.0, m2 = 0.0;
    for (long s = 0; s < samples; ++s) {
        for (int n = 0; n < m; ++n) {
            const double re = normal(rng);
            const double im = normal(rng);
            p(n) = re * re + im * im;
        }
        p /= p.sum();
        const double x = p.dot(d * p);
        const double delta = x - mean;
        mean += delta / static_cast<double>(s + 1);
        m2 += delta * (x - mean);
    }
    const double variance = samples > 1 ? m2 / static_cast<double>(samples - 1) : 0.0;
    const double mean_se = std::sqrt(variance / static_cast<double>(samples));

    FidelityResult r;
    r.value = std::sqrt(std::clamp(mean, 0.0, 1.0));
    r.method = FidelityMethod::monte_carlo;
    r.samples = samples;
    r.std_error = r.value > 0.0 ? mean_se / (2.0 * r.value) : mean_se;
    r.parameters = table_parameters(table);
    return r;
}

FidelityResult fixed_input_fidelity(const DephasingTable& table, const FockVector& input) {
    check_table(table);
    if (input.cutoff() != table.cutoff)
        throw InputError("input cutoff does not match the dephasing table");
    const Eigen::VectorXd p = input.coeffs().cwiseAbs2();
    FidelityResult r;
    r.value = std::sqrt(std::clamp(p.dot(table.total() * p), 0.0, 1.0));
    r.method = FidelityMethod::fixed_input;
    r.parameters = table_parameters(table);
    return r;
}

std::vector<SweepRow> fidelity_sweep(int chain_n, const std::vector<double>& lambda_grid,
                                     const std::vector<double>& temperature_grid,
                                     const BathSpec& bath, int m, const SweepOptions& opts) {
    if (lambda_grid.empty() || temperature_grid.empty())
        throw InputError("fidelity sweep needs non-empty lambda and temperature grids");
    if (chain_n < 2)
        throw InputError("fidelity sweep needs a chain of at least 2 nodes");
    for (double l : lambda_grid)
        if (!(l > 0.0))
            throw InputError("lambda values must be positive");

    FidelityParameters base;
    base.r = bath.r;
    base.m = m;
    if (const auto* o = std::get_if<OhmicBath>(&bath.kind)) {
        base.gamma = o->gamma;
        base.cutoff_freq = o->cutoff_freq;
    }

    const FamilyTag chain{Family::engineered_chain, 0, 0, chain_n};
    std::vector<SweepRow> rows;
    std::uint64_t point = 0;
    for (double lambda : lambda_grid) {
        const double tau = optimal_time(chain, lambda);
        for (double temperature : temperature_grid) {
            const DephasingTable table = dephasing_table(bath, m, tau, temperature);
            FidelityParameters params = base;
            params.lambda = lambda;
            params.temperature = temperature;

            SweepRow row{lambda, temperature, average_fidelity_haar(table)};
            row.result.parameters = params;
            rows.push_back(row);

            if (opts.mc_samples > 0) {
                // Per-point stream keyed on (seed, point index).
                std::seed_seq seq{static_cast<std::uint32_t>(opts.seed),
                                  static_cast<std::uint32_t>(opts.seed >> 32),
                                  static_cast<std::uint32_t>(point)};
                std::uint32_t derived[2];
                seq.generate(derived, derived + 2);
                const std::uint64_t point_seed =
                    (static_cast<std::uint64_t>(derived[0]) << 32) | derived[1];
                SweepRow mc{lambda, temperature,
                            average_fidelity_mc(table, opts.mc_samples, point_seed)};
                mc.result.parameters = params;
                rows.push_back(mc);
            }
            ++point;
        }
    }
    return rows;
}

}  // namespace crnet
