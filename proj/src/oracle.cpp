#include "crnet/oracle.hpp"

#include "crnet/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace crnet {

FockSpace::FockSpace(int n_nodes, int cutoff) : n_nodes_(n_nodes), cutoff_(cutoff), dim_(1) {
    if (n_nodes < 1 || cutoff < 0)
        throw InputError("Fock space needs n_nodes >= 1 and cutoff >= 0");
    for (int u = 0; u < n_nodes; ++u) {
        dim_ *= cutoff + 1;
        if (dim_ > max_dim)
            throw InputError("Fock space dimension exceeds " + std::to_string(max_dim));
    }
}

long FockSpace::index(const std::vector<int>& occupations) const {
    if (static_cast<int>(occupations.size()) != n_nodes_)
        throw InputError("occupation tuple has the wrong length");
    long idx = 0;
    for (int n : occupations) {
        if (n < 0 || n > cutoff_)
            throw InputError("occupation outside the truncated space");
        idx = idx * (cutoff_ + 1) + n;
    }
    return idx;
}

std::vector<int> FockSpace::occupations(long index) const {
    if (index < 0 || index >= dim_)
        throw InputError("basis index out of range");
    std::vector<int> occ(n_nodes_);
    for (int u = n_nodes_ - 1; u >= 0; --u) {
        occ[u] = static_cast<int>(index % (cutoff_ + 1));
        index /= cutoff_ + 1;
    }
    return occ;
}

SparseMatrixC build_hamiltonian(const CouplingMatrix& coupling, double omega,
                                const FockSpace& space) {
    if (coupling.n_nodes != space.n_nodes())
        throw InputError("coupling matrix and Fock space disagree on the node count");

    const int n = space.n_nodes();
    std::vector<Eigen::Triplet<cplx>> triplets;
    for (long idx = 0; idx < space.dim(); ++idx) {
        std::vector<int> occ = space.occupations(idx);
        int total = 0;
        for (int x : occ)
            total += x;
        if (omega != 0.0 && total > 0)
            triplets.emplace_back(idx, idx, omega * total);

        // K_uv a_u^dag a_v |occ>
        for (int v = 0; v < n; ++v) {
            if (occ[v] == 0)
                continue;
            for (int u = 0; u < n; ++u) {
                if (u == v || coupling.k(u, v) == 0.0 || occ[u] == space.cutoff())
                    continue;
                const double amp = std::sqrt(static_cast<double>(occ[v])) *
                                   std::sqrt(static_cast<double>(occ[u] + 1));
                std::vector<int> next = occ;
                --next[v];
                ++next[u];
                triplets.emplace_back(space.index(next), idx, coupling.k(u, v) * amp);
            }
        }
    }
    SparseMatrixC h(space.dim(), space.dim());
    h.setFromTriplets(triplets.begin(), triplets.end());
    return h;
}

namespace {

Eigen::VectorXcd evolve_dense(const SparseMatrixC& h, const Eigen::VectorXcd& psi0, double t) {
    const Eigen::MatrixXcd dense = Eigen::MatrixXcd(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(dense);
    if (solver.info() != Eigen::Success)
        throw NumericalError("Hermitian eigensolver did not converge", 0.0);
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    const Eigen::VectorXcd phases =
        (cplx(0.0, -t) * solver.eigenvalues().cast<cplx>()).array().exp().matrix();
    return v * (phases.asDiagonal() * (v.adjoint() * psi0));
}

// One Lanczos step exp(-i H dt) v with full reorthogonalization.
Eigen::VectorXcd lanczos_step(const SparseMatrixC& h, const Eigen::VectorXcd& v, double dt,
                              int krylov_dim) {
    const double beta0 = v.norm();
    if (beta0 == 0.0)
        return v;
    std::vector<Eigen::VectorXcd> basis;
    basis.push_back(v / beta0);
    std::vector<double> alpha, beta;

    for (int j = 0; j < krylov_dim; ++j) {
        Eigen::VectorXcd w = h * basis[j];
        alpha.push_back(basis[j].dot(w).real());
        for (const auto& q : basis)
            w -= q.dot(w) * q;
        for (const auto& q : basis)
            w -= q.dot(w) * q;
        const double b = w.norm();
        if (b < 1e-12 || j + 1 == krylov_dim)
            break;
        beta.push_back(b);
        basis.push_back(w / b);
    }

    const int k = static_cast<int>(alpha.size());
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(k, k);
    for (int j = 0; j < k; ++j) {
        tri(j, j) = alpha[j];
        if (j + 1 < k) {
            tri(j, j + 1) = beta[j];
            tri(j + 1, j) = beta[j];
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(tri);
    const Eigen::MatrixXcd q = solver.eigenvectors().cast<cplx>();
    const Eigen::VectorXcd phases =
        (cplx(0.0, -dt) * solver.eigenvalues().cast<cplx>()).array().exp().matrix();
    const Eigen::VectorXcd y = beta0 * (q * (phases.asDiagonal() * q.row(0).transpose()));

    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(v.size());
    for (int j = 0; j < k; ++j)
        out += y(j) * basis[j];
    return out;
}

double one_norm(const SparseMatrixC& h) {
    double best = 0.0;
    for (int c = 0; c < h.outerSize(); ++c) {
        double col = 0.0;
        for (SparseMatrixC::InnerIterator it(h, c); it; ++it)
            col += std::abs(it.value());
        best = std::max(best, col);
    }
    return best;
}

}  // namespace

Eigen::VectorXcd evolve_exact(const SparseMatrixC& h, const Eigen::VectorXcd& psi0, double t) {
    if (h.rows() != h.cols() || h.rows() != psi0.size())
        throw InputError("Hamiltonian and state dimensions do not match");
    const double norm0 = psi0.norm();
    if (std::abs(norm0 - 1.0) > 1e-9)
        throw InputError("initial state must be normalized");
    if (t == 0.0)
        return psi0;

    Eigen::VectorXcd psi;
    if (h.rows() <= dense_evolution_limit) {
        psi = evolve_dense(h, psi0, t);
    } else {
        const int krylov_dim = 40;
        const double spread = one_norm(h) * std::abs(t);
        const int steps = std::max(1, static_cast<int>(std::ceil(spread / 8.0)));
        const double dt = t / steps;
        psi = psi0;
        for (int s = 0; s < steps; ++s)
            psi = lanczos_step(h, psi, dt, krylov_dim);
    }

    const double drift = std::abs(psi.norm() - norm0);
    if (drift > 1e-9)
        throw NumericalError("exact evolution lost normalization (drift " +
                                 std::to_string(drift) + ")",
                             drift);
    return psi;
}

Eigen::VectorXcd product_state(const FockSpace& space, const NetworkState& state) {
    if (state.size() != space.n_nodes())
        throw InputError("network state and Fock space disagree on the node count");
    Eigen::VectorXcd psi = Eigen::VectorXcd::Ones(1);
    for (const auto& node : state.nodes) {
        Eigen::VectorXcd local = Eigen::VectorXcd::Zero(space.cutoff() + 1);
        if (std::holds_alternative<Vacuum>(node)) {
            local(0) = 1.0;
        } else if (const auto* fock = std::get_if<FockVector>(&node)) {
            if (fock->cutoff() > space.cutoff() + 1)
                throw InputError("Fock vector exceeds the space cutoff");
            local.head(fock->cutoff()) = fock->coeffs();
        } else {
            throw InputError("product_state accepts Fock or vacuum nodes only");
        }
        Eigen::VectorXcd next(psi.size() * local.size());
        for (Eigen::Index i = 0; i < psi.size(); ++i)
            next.segment(i * local.size(), local.size()) = psi(i) * local;
        psi = std::move(next);
    }
    return psi;
}

double photon_number(const FockSpace& space, const Eigen::VectorXcd& psi) {
    if (psi.size() != space.dim())
        throw InputError("state dimension does not match the Fock space");
    double total = 0.0;
    for (long idx = 0; idx < space.dim(); ++idx) {
        const double p = std::norm(psi(idx));
        if (p == 0.0)
            continue;
        int n = 0;
        for (int x : space.occupations(idx))
            n += x;
        total += p * n;
    }
    return total;
}

int coherent_cutoff(cplx alpha) {
    const double a = std::abs(alpha);
    return static_cast<int>(std::ceil(a * a + 8.0 * a + 8.0));
}

TruncatedCoherent truncated_coherent(cplx alpha, int cutoff) {
    if (cutoff < 0)
        throw InputError("coherent truncation cutoff must be >= 0");
    Eigen::VectorXcd c(cutoff + 1);
    c(0) = std::exp(-std::norm(alpha) / 2.0);
    for (int n = 1; n <= cutoff; ++n)
        c(n) = c(n - 1) * alpha / std::sqrt(static_cast<double>(n));
    const double kept = c.squaredNorm();
    return {FockVector::normalized(std::move(c)), std::max(0.0, 1.0 - kept)};
}

double discrete_dephasing_exact(int delta_n, const BathSpec& modes, double tau,
                                double temperature) {
    const auto* bath = std::get_if<DiscreteBath>(&modes.kind);
    if (!bath)
        throw InputError("dephasing oracle needs a discrete mode list");
    modes.validate();
    if (!(temperature >= 0.0))
        throw InputError("temperature must be >= 0");

    double d = 1.0;
    for (const auto& m : bath->modes) {
        // beta_j = -i dn r xi_j^* eta_j(tau), eta_j = i (e^{-i w tau} - 1) / w
        const cplx eta = cplx(0.0, 1.0) * (std::exp(cplx(0.0, -m.omega * tau)) - 1.0) / m.omega;
        const cplx beta = cplx(0.0, -1.0) * static_cast<double>(delta_n) * modes.r *
                          std::sqrt(m.xi_sq) * eta;
        // <n> + 1/2 = coth(w / 2T) / 2
        const double occupation_half =
            temperature == 0.0 ? 0.5 : 0.5 / std::tanh(m.omega / (2.0 * temperature));
        d *= std::exp(-std::norm(beta) * occupation_half);
    }
    return d;
}

}  // namespace crnet
