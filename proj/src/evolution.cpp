#include "crnet/evolution.hpp"

#include "crnet/errors.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace crnet {

SpectralDecomposition decompose(const Eigen::MatrixXd& symmetric) {
    if (symmetric.rows() != symmetric.cols() || symmetric.rows() == 0)
        throw InputError("decompose expects a non-empty square matrix");
    const double scale = std::max(1.0, symmetric.cwiseAbs().maxCoeff());
    if ((symmetric - symmetric.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw InputError("decompose expects a symmetric matrix");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
    if (solver.info() != Eigen::Success)
        throw NumericalError("symmetric eigensolver did not converge", 0.0);

    SpectralDecomposition d;
    d.eigenvalues = solver.eigenvalues();
    d.eigenvectors = solver.eigenvectors().transpose();
    return d;
}

SpectralDecomposition decompose(const CouplingMatrix& coupling) {
    return decompose(coupling.k);
}

Propagator propagate(const SpectralDecomposition& decomp, double t, double omega) {
    if (!std::isfinite(t))
        throw InputError("propagation time must be finite");
    const Eigen::VectorXcd phases =
        (cplx(0.0, t) * decomp.eigenvalues.cast<cplx>()).array().exp().matrix();
    const Eigen::MatrixXcd u = decomp.eigenvectors.cast<cplx>();

    Propagator p;
    p.matrix = u.transpose() * phases.asDiagonal() * u;
    p.time = t;
    p.omega = omega;
    p.free_phase = std::exp(cplx(0.0, omega * t));
    return p;
}

cplx transfer_amplitude(const SpectralDecomposition& decomp, int from, int to, double t) {
    cplx sum{0.0, 0.0};
    for (int k = 0; k < decomp.size(); ++k)
        sum += decomp.eigenvectors(k, to) * decomp.eigenvectors(k, from) *
               std::exp(cplx(0.0, decomp.eigenvalues(k) * t));
    return sum;
}

double optimal_time(const FamilyTag& family, double kappa_or_lambda) {
    if (!(kappa_or_lambda > 0.0))
        throw InputError("coupling parameter must be positive");
    switch (family.kind) {
        case Family::path2:
        case Family::path3:
        case Family::hypercube:
            return std::numbers::pi / (std::pow(2.0, 1.0 / family.theta) * kappa_or_lambda);
        case Family::engineered_chain:
            return std::numbers::pi / kappa_or_lambda;
        case Family::custom:
            break;
    }
    throw InputError("no analytic optimal time for custom networks; use find_pst_time");
}

int mirror_phase_power(const FamilyTag& family) {
    switch (family.kind) {
        case Family::path2:
        case Family::path3:
        case Family::hypercube:
            return family.theta * family.g;
        case Family::engineered_chain:
            return family.n - 1;
        case Family::custom:
            break;
    }
    throw InputError("no analytic mirror phase for custom networks");
}

cplx i_power(int p) {
    switch (((p % 4) + 4) % 4) {
        case 0: return {1.0, 0.0};
        case 1: return {0.0, 1.0};
        case 2: return {-1.0, 0.0};
        default: return {0.0, -1.0};
    }
}

cplx deterministic_phase(double omega, double tau, int power) {
    return std::exp(cplx(0.0, omega * tau)) * i_power(power);
}

SwapCertificate verify_swap(const Propagator& prop, cplx expected_phase, double tolerance) {
    const Eigen::Index n = prop.matrix.rows();
    if (prop.matrix.cols() != n)
        throw InputError("propagator must be square");

    double worst = 0.0;
    for (Eigen::Index u = 0; u < n; ++u)
        for (Eigen::Index m = 0; m < n; ++m) {
            const cplx target = (u == n - 1 - m) ? expected_phase : cplx{0.0, 0.0};
            worst = std::max(worst, std::abs(prop.matrix(u, m) - target));
        }

    SwapCertificate c;
    c.max_deviation = worst;
    c.tolerance = tolerance;
    c.is_perfect = worst < tolerance;
    c.optimal_time = prop.time;
    c.global_phase = prop.matrix(n - 1, 0);
    return c;
}

std::optional<PstResult> find_pst_time(const SpectralDecomposition& decomp, int from, int to,
                                       double t_max, int grid) {
    if (!(t_max > 0.0) || grid < 2)
        throw InputError("find_pst_time needs t_max > 0 and grid >= 2");
    if (from < 0 || to < 0 || from >= decomp.size() || to >= decomp.size())
        throw InputError("node index out of range");

    auto modulus = [&](double t) { return std::abs(transfer_amplitude(decomp, from, to, t)); };

    const double step = t_max / (grid - 1);
    int best = 0;
    double best_value = -1.0;
    for (int i = 0; i < grid; ++i) {
        const double v = modulus(i * step);
        if (v > best_value + 1e-15) {
            best_value = v;
            best = i;
        }
    }

    // Disconnected nodes: no transfer at any time.
    if (best_value < 1e-12)
        return std::nullopt;

    double a = std::max(0.0, (best - 1) * step);
    double b = std::min(t_max, (best + 1) * step);
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = modulus(c);
    double fd = modulus(d);
    while (b - a > 1e-12) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = modulus(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = modulus(d);
        }
    }

    // The grid point itself may beat the bracket interior (e.g. a maximum at t=0).
    double t_best = 0.5 * (a + b);
    if (best_value > modulus(t_best))
        t_best = best * step;

    // Golden section only resolves the peak to ~sqrt(eps); bisect on the sign
    // of d|A|^2/dt to pin it down to rounding.
    auto slope = [&](double t) {
        cplx amp{0.0, 0.0}, rate{0.0, 0.0};
        for (int k = 0; k < decomp.size(); ++k) {
            const cplx term = decomp.eigenvectors(k, to) * decomp.eigenvectors(k, from) *
                              std::exp(cplx(0.0, decomp.eigenvalues(k) * t));
            amp += term;
            rate += cplx(0.0, decomp.eigenvalues(k)) * term;
        }
        return (std::conj(amp) * rate).real();
    };
    double lo = std::max(0.0, t_best - 1e-6), hi = std::min(t_max, t_best + 1e-6);
    if (slope(lo) > 0.0 && slope(hi) < 0.0) {
        for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi)
                break;
            (slope(mid) > 0.0 ? lo : hi) = mid;
        }
        t_best = 0.5 * (lo + hi);
    }

    const cplx amp = transfer_amplitude(decomp, from, to, t_best);
    const double mod = std::abs(amp);
    PstResult r;
    r.time = t_best;
    r.phase = mod > 0.0 ? amp / mod : cplx{1.0, 0.0};
    r.deviation = 1.0 - mod;
    return r;
}

std::vector<cplx> multimode_phase(const std::vector<double>& omegas, double tau, int power,
                                  PhaseMode mode) {
    if (!(tau > 0.0))
        throw InputError("multimode_phase needs tau > 0");
    if (mode == PhaseMode::chain && power < 1)
        throw InputError("chain mirror power N-1 must be >= 1");
    if (mode == PhaseMode::hypercube && power < 1)
        throw InputError("hypercube mirror power theta*g must be >= 1");
    std::vector<cplx> out;
    out.reserve(omegas.size());
    for (double w : omegas)
        out.push_back(deterministic_phase(w, tau, power));
    return out;
}

double unitarity_defect(const Eigen::MatrixXcd& m) {
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
    return (m * m.adjoint() - id).cwiseAbs().maxCoeff();
}

}  // namespace crnet
