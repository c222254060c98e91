#pragma once

#include "crnet/topology.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

namespace crnet {

using cplx = std::complex<double>;

/// Eigenpairs of a real symmetric matrix. Row k of `eigenvectors` is the
/// normal mode U_k, so that U * K * U^T = diag(eigenvalues).
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;   // ascending
    Eigen::MatrixXd eigenvectors;  // rows are modes

    int size() const { return static_cast<int>(eigenvalues.size()); }
};

/// Single-particle propagator exp(iKt). The resonator frequency only
/// contributes the scalar e^{i omega t}, kept apart in `free_phase`.
struct Propagator {
    Eigen::MatrixXcd matrix;
    double time = 0.0;
    double omega = 0.0;
    cplx free_phase{1.0, 0.0};

    /// Full creation-operator transfer matrix including e^{i omega t}.
    Eigen::MatrixXcd full() const { return free_phase * matrix; }
};

struct SwapCertificate {
    bool is_perfect = false;
    double optimal_time = 0.0;
    cplx global_phase;  // realized corner element matrix(N-1, 0)
    double max_deviation = 0.0;
    double tolerance = 0.0;
};

struct PstResult {
    double time = 0.0;
    cplx phase;        // amplitude / |amplitude|
    double deviation;  // 1 - |amplitude|
};

enum class PhaseMode { hypercube, chain };

inline constexpr double default_swap_tolerance = 1e-9;

SpectralDecomposition decompose(const CouplingMatrix& coupling);
SpectralDecomposition decompose(const Eigen::MatrixXd& symmetric);

Propagator propagate(const SpectralDecomposition& decomp, double t, double omega = 0.0);

/// Single transfer amplitude [exp(iKt)]_{to,from} without forming the matrix.
cplx transfer_amplitude(const SpectralDecomposition& decomp, int from, int to, double t);

/// tau = pi / (2^{1/theta} kappa) for hypercubes (and P2/P3), pi / lambda for
/// engineered chains.
double optimal_time(const FamilyTag& family, double kappa_or_lambda);

/// Exponent p in the mirror phase i^p: theta*g for hypercubes, N-1 for chains.
int mirror_phase_power(const FamilyTag& family);

/// i^p evaluated exactly.
cplx i_power(int p);

/// P0 = e^{i omega tau} i^p.
cplx deterministic_phase(double omega, double tau, int power);

SwapCertificate verify_swap(const Propagator& prop, cplx expected_phase,
                            double tolerance = default_swap_tolerance);

/// Numerical search for the time maximizing |[exp(iKt)]_{to,from}| on
/// [0, t_max]: uniform scan followed by golden-section refinement.
std::optional<PstResult> find_pst_time(const SpectralDecomposition& decomp, int from, int to,
                                       double t_max, int grid);

/// Per-mode phases P_{0,m} = e^{i Omega_m tau} i^{power} of a multi-mode network.
/// `power` is theta*g (hypercube) or N-1 (chain); the transfer matrix is shared.
std::vector<cplx> multimode_phase(const std::vector<double>& omegas, double tau, int power,
                                  PhaseMode mode);

/// max |P P^dagger - I|.
double unitarity_defect(const Eigen::MatrixXcd& m);

}  // namespace crnet
