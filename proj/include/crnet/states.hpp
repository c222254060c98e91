#pragma once

#include <Eigen/Dense>

#include <complex>
#include <variant>
#include <vector>

namespace crnet {

using cplx = std::complex<double>;

/// Normalized Fock-basis coefficients c_0..c_{M-1} of one resonator.
class FockVector {
public:
    /// Throws InputError unless sum |c_n|^2 == 1 within `tolerance`.
    explicit FockVector(Eigen::VectorXcd coeffs, double tolerance = 1e-12);

    /// Rescales `coeffs` to unit norm first.
    static FockVector normalized(Eigen::VectorXcd coeffs);
    static FockVector vacuum(int cutoff);

    const Eigen::VectorXcd& coeffs() const { return coeffs_; }
    int cutoff() const { return static_cast<int>(coeffs_.size()); }

private:
    Eigen::VectorXcd coeffs_;
};

struct CoherentAmplitude {
    cplx alpha;
};

/// (|h>^{(x)M} + |v>^{(x)M}) / sqrt(2) carried by M photons at one node.
struct EntangledTag {
    int m_photons = 1;
};

struct Vacuum {};

using NodeState = std::variant<Vacuum, FockVector, CoherentAmplitude, EntangledTag>;

struct NetworkState {
    std::vector<NodeState> nodes;

    int size() const { return static_cast<int>(nodes.size()); }
};

struct EntangledSwapResult {
    NetworkState state;
    cplx global_phase;
};

/// Ideal SWAP on coherent states: node N-1-u receives conj(p0) * alpha_u.
NetworkState apply_swap_coherent(const NetworkState& state, cplx p0);

/// Mirrors M-photon GHZ tags; the overall phase is prod_u conj(p0)^{M_u}.
EntangledSwapResult apply_swap_entangled(const NetworkState& state, cplx p0);

/// Mirrors Fock vectors; the n-photon component picks up conj(p0)^n.
NetworkState mirror_fock(const NetworkState& state, cplx p0);

}  // namespace crnet
