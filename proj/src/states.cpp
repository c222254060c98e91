#include "crnet/states.hpp"

#include "crnet/errors.hpp"

#include <cmath>
#include <string>

namespace crnet {

FockVector::FockVector(Eigen::VectorXcd coeffs, double tolerance) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0)
        throw InputError("Fock vector needs at least one coefficient");
    const double norm_sq = coeffs_.squaredNorm();
    if (!(std::abs(norm_sq - 1.0) <= tolerance))
        throw InputError("Fock coefficients are not normalized (sum |c|^2 = " +
                         std::to_string(norm_sq) + ")");
}

FockVector FockVector::normalized(Eigen::VectorXcd coeffs) {
    const double norm = coeffs.norm();
    if (!(norm > 0.0) || !std::isfinite(norm))
        throw InputError("cannot normalize a zero Fock vector");
    coeffs /= norm;
    return FockVector(std::move(coeffs), 1e-12);
}

FockVector FockVector::vacuum(int cutoff) {
    if (cutoff < 1)
        throw InputError("Fock cutoff must be >= 1");
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(cutoff);
    c(0) = 1.0;
    return FockVector(std::move(c));
}

NetworkState apply_swap_coherent(const NetworkState& state, cplx p0) {
    const int n = state.size();
    NetworkState out;
    out.nodes.assign(n, Vacuum{});
    for (int u = 0; u < n; ++u) {
        const auto& node = state.nodes[u];
        if (std::holds_alternative<Vacuum>(node))
            continue;
        const auto* coherent = std::get_if<CoherentAmplitude>(&node);
        if (!coherent)
            throw InputError("coherent SWAP expects coherent or vacuum nodes only");
        out.nodes[n - 1 - u] = CoherentAmplitude{std::conj(p0) * coherent->alpha};
    }
    return out;
}

EntangledSwapResult apply_swap_entangled(const NetworkState& state, cplx p0) {
    const int n = state.size();
    EntangledSwapResult out;
    out.state.nodes.assign(n, Vacuum{});
    out.global_phase = {1.0, 0.0};
    for (int u = 0; u < n; ++u) {
        const auto& node = state.nodes[u];
        if (std::holds_alternative<Vacuum>(node))
            continue;
        const auto* tag = std::get_if<EntangledTag>(&node);
        if (!tag)
            throw InputError("entangled SWAP expects GHZ-tagged or vacuum nodes only");
        if (tag->m_photons < 1)
            throw InputError("GHZ tag needs at least one photon");
        out.state.nodes[n - 1 - u] = *tag;
        out.global_phase *= std::pow(std::conj(p0), tag->m_photons);
    }
    return out;
}

NetworkState mirror_fock(const NetworkState& state, cplx p0) {
    const int n = state.size();
    int cutoff = 0;
    for (const auto& node : state.nodes) {
        if (std::holds_alternative<Vacuum>(node))
            continue;
        const auto* fock = std::get_if<FockVector>(&node);
        if (!fock)
            throw InputError("Fock mirror expects Fock or vacuum nodes only");
        if (cutoff == 0)
            cutoff = fock->cutoff();
        else if (fock->cutoff() != cutoff)
            throw InputError("Fock vectors must share a common cutoff");
    }

    NetworkState out;
    out.nodes.assign(n, Vacuum{});
    const cplx q = std::conj(p0);
    for (int u = 0; u < n; ++u) {
        const auto* fock = std::get_if<FockVector>(&state.nodes[u]);
        if (!fock)
            continue;
        Eigen::VectorXcd c = fock->coeffs();
        cplx power{1.0, 0.0};
        for (Eigen::Index k = 0; k < c.size(); ++k) {
            c(k) *= power;
            power *= q;
        }
        out.nodes[n - 1 - u] = FockVector(std::move(c), 1e-10);
    }
    return out;
}

}  // namespace crnet
