#pragma once

#include "crnet/states.hpp"

#include <Eigen/Dense>

#include <complex>
#include <filesystem>
#include <variant>
#include <vector>

namespace crnet {

/// J(w) = gamma * w * exp(-w / cutoff_freq).
struct OhmicBath {
    double gamma = 1.0;        // dimensionless coupling
    double cutoff_freq = 1.0;  // response frequency Gamma
};

struct BathMode {
    double omega = 1.0;
    double xi_sq = 0.0;  // |xi_j|^2
};

struct DiscreteBath {
    std::vector<BathMode> modes;
};

/// Pure-dephasing bath plus the uniform network-bath coupling r.
struct BathSpec {
    std::variant<OhmicBath, DiscreteBath> kind;
    double r = 1.0;

    bool is_ohmic() const { return std::holds_alternative<OhmicBath>(kind); }
    /// Throws InputError on gamma < 0, Gamma <= 0, omega_j <= 0, xi_sq < 0 or r < 0.
    void validate() const;
};

/// D_{n,n'}(T) split into vacuum and thermal factors over Fock indices 0..M-1.
struct DephasingTable {
    int cutoff = 1;
    Eigen::MatrixXd d0;
    Eigen::MatrixXd dT;
    double temperature = 0.0;
    double tau = 0.0;

    Eigen::MatrixXd total() const { return d0.cwiseProduct(dT); }
};

double spectral_density(const OhmicBath& bath, double omega);

/// F(t) = 2 int dw J(w) (t - sin(wt)/w) / w. Ohmic baths use adaptive quadrature.
double f_number(const BathSpec& spec, double t);

/// |eta(t)|^2 = 4 sin^2(wt/2) / w^2.
double eta_abs_sq(double omega, double t);

/// Bose occupation 1/(e^{w/T}-1); zero at T = 0.
double bose_occupation(double omega, double temperature);

/// int dw J(w) |eta_w(tau)|^2 by quadrature (Ohmic) or the mode sum (discrete).
double dephasing_weight(const BathSpec& spec, double tau);

/// D0 for photon-number difference `delta_n`.
double vacuum_factor(const BathSpec& spec, int delta_n, double tau);

/// Integrand of I(tau), continuous at w = 0 where it equals T tau^2 / 4.
double thermal_integrand(const OhmicBath& bath, double omega, double tau, double temperature);

/// I(tau) = int dw sin^2(w tau/2) / (w e^{w/Gamma} (e^{w/T}-1)); 0 at T = 0.
double thermal_integral(const OhmicBath& bath, double tau, double temperature);
/// Same, rejecting discrete baths.
double thermal_integral(const BathSpec& spec, double tau, double temperature);

/// DT for photon-number difference `delta_n`.
double thermal_factor(const BathSpec& spec, int delta_n, double tau, double temperature);

DephasingTable dephasing_table(const BathSpec& spec, int cutoff, double tau, double temperature);

/// c_n -> conj(p0)^n exp(-i n(n+1) r^2 F(-tau)/2) c_n given F(-tau) directly.
Eigen::VectorXcd dressed_coefficients(const FockVector& coeffs, cplx p0, double r,
                                      double f_at_minus_tau);
Eigen::VectorXcd dressed_coefficients(const FockVector& coeffs, cplx p0, const BathSpec& spec,
                                      double tau);

/// Midpoint sampling of an Ohmic density on a geometric grid with weights
/// |xi_j|^2 = J(w_j) dw_j.
DiscreteBath discretize_ohmic(const OhmicBath& bath, int n_modes, double omega_min,
                              double omega_max);

/// Reads `omega,xi_sq` rows (header line optional, '#' comments allowed).
DiscreteBath load_discrete_modes_csv(const std::filesystem::path& path);

}  // namespace crnet
