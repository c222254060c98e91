#pragma once

#include "crnet/bath.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace crnet {

enum class FidelityMethod { haar_closed_form, monte_carlo, fixed_input };

std::string to_string(FidelityMethod m);

struct FidelityParameters {
    double lambda = 0.0;
    double temperature = 0.0;
    double r = 0.0;
    double gamma = 0.0;
    double cutoff_freq = 0.0;
    int m = 0;
};

struct FidelityResult {
    double value = 1.0;
    FidelityMethod method = FidelityMethod::haar_closed_form;
    long samples = 0;
    double std_error = 0.0;
    FidelityParameters parameters;
};

struct SweepRow {
    double lambda = 0.0;
    double temperature = 0.0;
    FidelityResult result;
};

/// sqrt(sum_{n,n'} E|c_n|^2|c_n'|^2 D_{n,n'}) with the Haar moments
/// E|c_n|^2|c_n'|^2 = (1 + delta_{nn'}) / (M(M+1)).
FidelityResult average_fidelity_haar(const DephasingTable& table);

/// Monte Carlo estimate of the same average from normalized complex Gaussian
/// vectors. Bit-reproducible for a fixed seed.
FidelityResult average_fidelity_mc(const DephasingTable& table, long samples, std::uint64_t seed);

/// Fidelity of one fixed input vector: sqrt(sum |c_n|^2 |c_n'|^2 D_{n,n'}).
FidelityResult fixed_input_fidelity(const DephasingTable& table, const FockVector& input);

struct SweepOptions {
    long mc_samples = 0;  // 0 disables the Monte Carlo cross-check rows
    std::uint64_t seed = 0;
};

/// Engineered-chain sweep: for every (lambda, T), tau' = pi/lambda and the Haar
/// average of the resulting dephasing table. Rows are lambda-major. The chain
/// length only enters through tau', which does not depend on it.
std::vector<SweepRow> fidelity_sweep(int chain_n, const std::vector<double>& lambda_grid,
                                     const std::vector<double>& temperature_grid,
                                     const BathSpec& bath, int m, const SweepOptions& opts = {});

}  // namespace crnet
