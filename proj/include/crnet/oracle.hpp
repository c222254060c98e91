#pragma once

#include "crnet/bath.hpp"
#include "crnet/states.hpp"
#include "crnet/topology.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <vector>

namespace crnet {

using SparseMatrixC = Eigen::SparseMatrix<cplx>;

/// Truncated bosonic Fock space of `n_nodes` modes with at most `cutoff`
/// photons per mode. Basis index = sum_u n_u (cutoff+1)^(N-1-u).
class FockSpace {
public:
    static constexpr long max_dim = 100000;

    FockSpace(int n_nodes, int cutoff);

    int n_nodes() const { return n_nodes_; }
    int cutoff() const { return cutoff_; }
    long dim() const { return dim_; }

    long index(const std::vector<int>& occupations) const;
    std::vector<int> occupations(long index) const;

private:
    int n_nodes_;
    int cutoff_;
    long dim_;
};

/// Omega sum_u n_u + sum_{u != v} K_uv a_u^dag a_v on the truncated space;
/// raising past the cutoff annihilates the state.
SparseMatrixC build_hamiltonian(const CouplingMatrix& coupling, double omega,
                                const FockSpace& space);

inline constexpr long dense_evolution_limit = 2000;

/// exp(-iHt) psi0. Dense eigendecomposition up to dense_evolution_limit,
/// Lanczos stepping above. Throws NumericalError if the norm drifts by more
/// than 1e-9.
Eigen::VectorXcd evolve_exact(const SparseMatrixC& h, const Eigen::VectorXcd& psi0, double t);

/// Product of per-node Fock vectors (vacuum nodes allowed) as a vector in `space`.
Eigen::VectorXcd product_state(const FockSpace& space, const NetworkState& state);

/// Total photon-number expectation <psi| sum_u n_u |psi>.
double photon_number(const FockSpace& space, const Eigen::VectorXcd& psi);

struct TruncatedCoherent {
    FockVector state;
    double tail_mass;  // probability discarded before renormalization
};

/// Smallest cutoff with |alpha|^2 + 8|alpha| + 8 <= cutoff.
int coherent_cutoff(cplx alpha);

/// |alpha> restricted to photon numbers 0..cutoff and renormalized.
TruncatedCoherent truncated_coherent(cplx alpha, int cutoff);

/// prod_j exp(-|beta_j|^2 (<n_j> + 1/2)), the thermal expectation of the
/// bath displacement for photon-number difference `delta_n`, evaluated mode
/// by mode from the Gaussian integral.
double discrete_dephasing_exact(int delta_n, const BathSpec& modes, double tau,
                                double temperature);

}  // namespace crnet
