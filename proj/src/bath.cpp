#include "crnet/bath.hpp"

#include "crnet/errors.hpp"
#include "quadrature.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

namespace crnet {

namespace {

double upper_frequency(const OhmicBath& bath, double temperature) {
    return bath.cutoff_freq * std::max(50.0, 20.0 * temperature / bath.cutoff_freq);
}

int oscillation_panels(double omega_max, double t) {
    const double periods = omega_max * std::abs(t) / (2.0 * std::numbers::pi);
    return static_cast<int>(std::clamp(std::ceil(periods / 4.0), 1.0, 4096.0));
}

// x - sin(x); the series branch avoids cancellation for small x.
double x_minus_sin(double x) {
    if (std::abs(x) < 0.1) {
        const double x2 = x * x;
        double term = x * x2 / 6.0;
        double sum = term;
        for (int k = 2; k < 8; ++k) {
            term *= -x2 / ((2.0 * k) * (2.0 * k + 1.0));
            sum += term;
        }
        return sum;
    }
    return x - std::sin(x);
}

const OhmicBath& require_ohmic(const BathSpec& spec) {
    const auto* o = std::get_if<OhmicBath>(&spec.kind);
    if (!o)
        throw InputError("operation requires an Ohmic bath");
    return *o;
}

void check_tau(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau))
        throw InputError("tau must be positive and finite");
}

void check_temperature(double temperature) {
    if (!(temperature >= 0.0) || !std::isfinite(temperature))
        throw InputError("temperature must be >= 0");
}

}  // namespace

void BathSpec::validate() const {
    if (!(r >= 0.0) || !std::isfinite(r))
        throw InputError("network-bath coupling r must be >= 0");
    if (const auto* o = std::get_if<OhmicBath>(&kind)) {
        if (!(o->gamma >= 0.0))
            throw InputError("Ohmic gamma must be >= 0");
        if (!(o->cutoff_freq > 0.0))
            throw InputError("Ohmic Gamma must be > 0");
    } else {
        for (const auto& m : std::get<DiscreteBath>(kind).modes) {
            if (!(m.omega > 0.0))
                throw InputError("bath mode frequencies must be > 0");
            if (!(m.xi_sq >= 0.0))
                throw InputError("bath mode weights |xi|^2 must be >= 0");
        }
    }
}

double spectral_density(const OhmicBath& bath, double omega) {
    return bath.gamma * omega * std::exp(-omega / bath.cutoff_freq);
}

double f_number(const BathSpec& spec, double t) {
    spec.validate();
    if (!std::isfinite(t))
        throw InputError("F(t) needs a finite time");
    if (t == 0.0)
        return 0.0;

    if (const auto* d = std::get_if<DiscreteBath>(&spec.kind)) {
        double sum = 0.0;
        for (const auto& m : d->modes)
            sum += m.xi_sq * x_minus_sin(m.omega * t) / (m.omega * m.omega);
        return 2.0 * sum;
    }

    const auto& o = std::get<OhmicBath>(spec.kind);
    // 2 J(w)(t - sin wt / w)/w = 2 gamma e^{-w/Gamma} (wt - sin wt)/w
    auto integrand = [&](double w) {
        if (w == 0.0)
            return 0.0;
        return 2.0 * o.gamma * std::exp(-w / o.cutoff_freq) * x_minus_sin(w * t) / w;
    };
    const double w_max = upper_frequency(o, 0.0);
    return detail::integrate(integrand, 0.0, w_max, oscillation_panels(w_max, t), "F(t)");
}

double eta_abs_sq(double omega, double t) {
    if (!(omega > 0.0))
        throw InputError("eta needs omega > 0");
    const double s = std::sin(0.5 * omega * t);
    return 4.0 * s * s / (omega * omega);
}

double bose_occupation(double omega, double temperature) {
    if (temperature == 0.0)
        return 0.0;
    return 1.0 / std::expm1(omega / temperature);
}

double dephasing_weight(const BathSpec& spec, double tau) {
    spec.validate();
    check_tau(tau);
    if (const auto* d = std::get_if<DiscreteBath>(&spec.kind)) {
        double sum = 0.0;
        for (const auto& m : d->modes)
            sum += m.xi_sq * eta_abs_sq(m.omega, tau);
        return sum;
    }
    const auto& o = std::get<OhmicBath>(spec.kind);
    auto integrand = [&](double w) {
        if (w == 0.0)
            return 0.0;
        const double s = std::sin(0.5 * w * tau);
        return o.gamma * std::exp(-w / o.cutoff_freq) * 4.0 * s * s / w;
    };
    const double w_max = upper_frequency(o, 0.0);
    return detail::integrate(integrand, 0.0, w_max, oscillation_panels(w_max, tau),
                             "vacuum dephasing weight");
}

double vacuum_factor(const BathSpec& spec, int delta_n, double tau) {
    spec.validate();
    check_tau(tau);
    if (delta_n == 0)
        return 1.0;
    const double dn2 = static_cast<double>(delta_n) * delta_n;
    if (const auto* o = std::get_if<OhmicBath>(&spec.kind)) {
        const double gt = o->cutoff_freq * tau;
        return std::pow(1.0 + gt * gt, -dn2 * spec.r * spec.r * o->gamma / 2.0);
    }
    double log_d = 0.0;
    for (const auto& m : std::get<DiscreteBath>(spec.kind).modes) {
        const double z = dn2 * spec.r * spec.r * m.xi_sq * eta_abs_sq(m.omega, tau);
        log_d -= z / 2.0;
    }
    return std::exp(log_d);
}

double thermal_integrand(const OhmicBath& bath, double omega, double tau, double temperature) {
    if (temperature == 0.0)
        return 0.0;
    if (omega == 0.0)
        return temperature * tau * tau / 4.0;
    const double s = std::sin(0.5 * omega * tau);
    return s * s / (omega * std::exp(omega / bath.cutoff_freq) * std::expm1(omega / temperature));
}

double thermal_integral(const OhmicBath& bath, double tau, double temperature) {
    check_tau(tau);
    check_temperature(temperature);
    if (!(bath.cutoff_freq > 0.0))
        throw InputError("Ohmic Gamma must be > 0");
    if (temperature == 0.0)
        return 0.0;
    auto integrand = [&](double w) { return thermal_integrand(bath, w, tau, temperature); };
    const double w_max = upper_frequency(bath, temperature);
    return detail::integrate(integrand, 0.0, w_max, oscillation_panels(w_max, tau),
                             "thermal integral I(tau)");
}

double thermal_integral(const BathSpec& spec, double tau, double temperature) {
    spec.validate();
    return thermal_integral(require_ohmic(spec), tau, temperature);
}

double thermal_factor(const BathSpec& spec, int delta_n, double tau, double temperature) {
    spec.validate();
    check_tau(tau);
    check_temperature(temperature);
    if (delta_n == 0 || temperature == 0.0)
        return 1.0;
    const double dn2 = static_cast<double>(delta_n) * delta_n;
    if (const auto* o = std::get_if<OhmicBath>(&spec.kind))
        return std::exp(-4.0 * o->gamma * dn2 * spec.r * spec.r *
                        thermal_integral(*o, tau, temperature));
    double log_d = 0.0;
    for (const auto& m : std::get<DiscreteBath>(spec.kind).modes) {
        const double z = dn2 * spec.r * spec.r * m.xi_sq * eta_abs_sq(m.omega, tau);
        log_d -= z * bose_occupation(m.omega, temperature);
    }
    return std::exp(log_d);
}

DephasingTable dephasing_table(const BathSpec& spec, int cutoff, double tau, double temperature) {
    spec.validate();
    check_tau(tau);
    check_temperature(temperature);
    if (cutoff < 1)
        throw InputError("dephasing table cutoff must be >= 1");

    // Both factors are exp(-(dn)^2 * c); evaluate the expensive parts once.
    std::vector<double> d0_by_dn(cutoff, 1.0), dT_by_dn(cutoff, 1.0);
    if (cutoff > 1) {
        const double d0_unit = vacuum_factor(spec, 1, tau);
        const double dT_unit = thermal_factor(spec, 1, tau, temperature);
        for (int dn = 1; dn < cutoff; ++dn) {
            const double dn2 = static_cast<double>(dn) * dn;
            d0_by_dn[dn] = std::pow(d0_unit, dn2);
            dT_by_dn[dn] = std::pow(dT_unit, dn2);
        }
    }

    DephasingTable t;
    t.cutoff = cutoff;
    t.tau = tau;
    t.temperature = temperature;
    t.d0.resize(cutoff, cutoff);
    t.dT.resize(cutoff, cutoff);
    for (int n = 0; n < cutoff; ++n)
        for (int m = 0; m < cutoff; ++m) {
            const int dn = std::abs(n - m);
            t.d0(n, m) = d0_by_dn[dn];
            t.dT(n, m) = dT_by_dn[dn];
        }
    return t;
}

Eigen::VectorXcd dressed_coefficients(const FockVector& coeffs, cplx p0, double r,
                                      double f_at_minus_tau) {
    if (std::abs(std::abs(p0) - 1.0) > 1e-12)
        throw InputError("P0 must have unit modulus");
    Eigen::VectorXcd out = coeffs.coeffs();
    const cplx q = std::conj(p0);
    cplx power{1.0, 0.0};
    for (Eigen::Index n = 0; n < out.size(); ++n) {
        const double nd = static_cast<double>(n);
        out(n) *= power * std::exp(cplx(0.0, -nd * (nd + 1.0) * r * r * f_at_minus_tau / 2.0));
        power *= q;
    }
    return out;
}

Eigen::VectorXcd dressed_coefficients(const FockVector& coeffs, cplx p0, const BathSpec& spec,
                                      double tau) {
    return dressed_coefficients(coeffs, p0, spec.r, f_number(spec, -tau));
}

DiscreteBath discretize_ohmic(const OhmicBath& bath, int n_modes, double omega_min,
                              double omega_max) {
    if (n_modes < 1 || !(omega_min > 0.0) || !(omega_max > omega_min))
        throw InputError("discretization needs n_modes >= 1 and 0 < omega_min < omega_max");
    DiscreteBath d;
    d.modes.reserve(n_modes);
    const double ratio = std::pow(omega_max / omega_min, 1.0 / n_modes);
    double lo = omega_min;
    for (int j = 0; j < n_modes; ++j) {
        const double hi = (j + 1 == n_modes) ? omega_max : lo * ratio;
        const double w = std::sqrt(lo * hi);
        d.modes.push_back({w, spectral_density(bath, w) * (hi - lo)});
        lo = hi;
    }
    return d;
}

DiscreteBath load_discrete_modes_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open bath CSV '" + path.string() + "'");
    DiscreteBath d;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#')
            continue;
        std::istringstream row(line);
        std::string a, b;
        if (!std::getline(row, a, ',') || !std::getline(row, b, ','))
            throw InputError(path.string() + ":" + std::to_string(line_no) +
                             ": expected 'omega,xi_sq'");
        try {
            d.modes.push_back({std::stod(a), std::stod(b)});
        } catch (const std::invalid_argument&) {
            if (line_no == 1 && d.modes.empty())
                continue;  // header
            throw InputError(path.string() + ":" + std::to_string(line_no) +
                             ": non-numeric bath mode");
        }
    }
    BathSpec probe{d, 0.0};
    probe.validate();
    return d;
}

}  // namespace crnet
