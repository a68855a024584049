#include "movm/stability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "movm/errors.hpp"
#include "movm/parallel.hpp"

namespace movm {

namespace {

void require_positive(double a, double d_tilde, const char* who) {
    if (!(a > 0.0) || !(d_tilde > 0.0) || !std::isfinite(a) || !std::isfinite(d_tilde))
        throw DomainError(std::string(who) + ": a and d_tilde must be positive");
}

void require_delay(double tau, const char* who) {
    if (!(tau >= 0.0) || !std::isfinite(tau)) throw DomainError(std::string(who) + ": delay must be >= 0");
    if (tau == 0.0) throw DegenerateInputError(std::string(who) + ": zero delay has no finite kappa_cr");
}

}  // namespace

bool no_delay_stable(double a, double d_tilde) { return a > 0.0 && d_tilde > 0.0; }

bool small_delay_sufficient(double a, double d_tilde, double tau) {
    return std::max(a, d_tilde) * tau < 1.0;
}

double chi(double a, double d_tilde) {
    require_positive(a, d_tilde, "chi");
    return std::sqrt(a * (a + std::sqrt(a * a + 4.0 * d_tilde * d_tilde)) / 2.0);
}

double critical_delay(double a, double d_tilde) {
    const double x = chi(a, d_tilde);
    return std::atan(x / d_tilde) / x;
}

HopfPoint hopf_point(double a, double d_tilde, double tau) {
    require_positive(a, d_tilde, "hopf_point");
    require_delay(tau, "hopf_point");
    HopfPoint h;
    h.chi = chi(a, d_tilde);
    const double angle = std::atan(h.chi / d_tilde);
    h.omega0 = angle / tau;
    h.kappa_cr = angle / (tau * h.chi);
    h.tau_cr = angle / h.chi;
    return h;
}

cplx crossing_velocity(double a, double d_tilde, double tau) {
    const HopfPoint h = hopf_point(a, d_tilde, tau);
    const double k = h.kappa_cr;
    const double d = a * d_tilde;
    const cplx lambda(0.0, h.omega0);
    const cplx e = std::exp(-lambda * tau);
    const cplx dk = a * lambda * e + 2.0 * k * d * e;
    const cplx dl = 2.0 * lambda + k * a * e - tau * e * (k * a * lambda + k * k * d);
    return -dk / dl;
}

double transversality(double a, double d_tilde, double tau) {
    return (1.0 / crossing_velocity(a, d_tilde, tau)).real();
}

std::optional<double> noc_boundary(double a, double d_tilde) {
    require_positive(a, d_tilde, "noc_boundary");
    const double m = kMMinus;
    const double arg = -a * (m + 1.0) / (m * m * d_tilde);
    if (!(arg > 0.0)) return std::nullopt;
    const double tau = std::log(arg) / (m * d_tilde);
    if (!(tau > 0.0) || !(tau < critical_delay(a, d_tilde))) return std::nullopt;
    return tau;
}

RootEstimate rightmost_root(double a, double d_tilde, double tau, double kappa) {
    require_positive(a, d_tilde, "rightmost_root");
    if (!(tau >= 0.0) || !(kappa > 0.0)) throw DomainError("rightmost_root: need tau >= 0, kappa > 0");
    const roots::QuasiPolynomial f = roots::pair_characteristic(a, d_tilde, tau, kappa);

    RootEstimate out;
    out.argument_real = roots::rightmost_real_part_argument(f);
    if (tau == 0.0) {
        const auto r = f.quadratic_roots();
        cplx best = r[0].real() >= r[1].real() ? r[0] : r[1];
        if (best.imag() < 0.0) best = std::conj(best);
        out.root = best;
        out.spectral = {best, best, best};
        return out;
    }
    out.spectral = roots::rightmost_root_spectral(f);
    out.root = out.spectral.polished;
    if (out.root.imag() < 0.0) out.root = std::conj(out.root);
    if (std::abs(out.argument_real - out.spectral.fine.real()) > 1e-4) {
        throw NumericError("rightmost root: argument principle gives " + std::to_string(out.argument_real) +
                           ", pseudospectral gives " + std::to_string(out.spectral.fine.real()));
    }
    return out;
}

double rightmost_root_real_part(double a, double d_tilde, double tau, double kappa) {
    return rightmost_root(a, d_tilde, tau, kappa).argument_real;
}

roots::QuasiPolynomial shifted_characteristic(double a, double d_tilde, double tau, double s) {
    if (!(tau > 0.0)) throw DomainError("shifted_characteristic: needs tau > 0");
    const double d = a * d_tilde;
    const double es = std::exp(s);
    roots::QuasiPolynomial f;
    f.b1 = -2.0 * s / tau;
    f.b0 = s * s / (tau * tau);
    f.c1 = a * es;
    f.c0 = (d - a * s / tau) * es;
    f.tau = tau;
    return f;
}

double rate_of_convergence(double a, double d_tilde, double tau) {
    require_positive(a, d_tilde, "rate_of_convergence");
    if (!(tau >= 0.0)) throw DomainError("rate_of_convergence: delay must be >= 0");
    if (tau == 0.0) {
        const auto r = roots::pair_characteristic(a, d_tilde, 0.0, 1.0).quadratic_roots();
        return -std::max(r[0].real(), r[1].real());
    }
    if (tau >= critical_delay(a, d_tilde)) return 0.0;

    auto stable = [&](double s) { return roots::all_roots_left(shifted_characteristic(a, d_tilde, tau, s)); };
    double lo = 0.0;
    double hi = 1.0;
    while (stable(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e3) throw NumericError("rate_of_convergence: shift search diverged");
    }
    while ((hi - lo) / tau > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        (stable(mid) ? lo : hi) = mid;
    }
    const double sigma = 0.5 * (lo + hi) / tau;

    const double direct = -rightmost_root_real_part(a, d_tilde, tau, 1.0);
    if (std::abs(direct - sigma) > 1e-5) {
        throw NumericError("rate_of_convergence: shifted-equation bisection gives " + std::to_string(sigma) +
                           ", rightmost root gives " + std::to_string(direct));
    }
    return sigma;
}

double default_settling_band(const Equilibrium& eq, double x0_dot_eq) {
    return 0.02 * std::max(std::abs(eq.y_star), x0_dot_eq);
}

SettlingTimes settling_time(const Trajectory& trajectory, double epsilon, const Equilibrium& eq) {
    if (!(epsilon > 0.0)) throw DomainError("settling_time: band must be positive");
    SettlingTimes out;
    const std::size_t n = trajectory.samples();
    if (n == 0) throw NotSettledError("settling_time: empty trajectory");
    for (std::size_t i = 0; i < trajectory.pairs(); ++i) {
        const auto& v = trajectory.v[i];
        const auto& y = trajectory.y[i];
        std::size_t k = n;
        while (k > 0 && std::abs(v[k - 1]) <= epsilon && std::abs(y[k - 1] - eq.y_star) <= epsilon) --k;
        if (k == n) {
            throw NotSettledError("settling_time: pair " + std::to_string(i + 1) +
                                  " is outside the band at the end of the run");
        }
        const double t = trajectory.t[k];
        out.per_pair.push_back(t);
        out.total += t;
    }
    return out;
}

StabilityReport stability_report(const PlatoonConfig& config) {
    config.validate();
    const Equilibrium eq = equilibrium(config);
    StabilityReport report;
    report.a = config.a;
    report.d_tilde = eq.d_tilde;
    report.kappa = config.kappa;
    const double tau_cr = critical_delay(config.a, eq.d_tilde);
    const auto tau_noc = noc_boundary(config.a, eq.d_tilde);
    report.pairs = parallel_map(config.pairs(), [&](std::size_t i) {
        PairStability p;
        p.tau = config.tau[i];
        const double scaled = config.kappa * p.tau;
        p.tau_cr = tau_cr / config.kappa;
        if (tau_noc) p.tau_noc = *tau_noc / config.kappa;
        p.small_delay_sufficient = small_delay_sufficient(config.a, eq.d_tilde, scaled);
        p.locally_stable = scaled < tau_cr;
        p.non_oscillatory = tau_noc.has_value() && scaled < *tau_noc;
        p.sigma = config.kappa * rate_of_convergence(config.a, eq.d_tilde, scaled);
        return p;
    });
    report.platoon_sigma = report.pairs.front().sigma;
    for (const auto& p : report.pairs) report.platoon_sigma = std::min(report.platoon_sigma, p.sigma);
    return report;
}

std::vector<ChartRow> stability_chart(const std::vector<double>& a_values, double d_tilde, double tau) {
    return parallel_map(a_values.size(), [&](std::size_t i) {
        ChartRow row;
        row.a = a_values[i];
        row.d_tilde = d_tilde;
        row.tau_cr = critical_delay(row.a, d_tilde);
        row.tau_noc = noc_boundary(row.a, d_tilde);
        try {
            row.sigma = rate_of_convergence(row.a, d_tilde, tau);
        } catch (const NumericError& e) {
            throw GridPointError(e.what(), row.a, tau);
        }
        row.sc_bound = 1.0 / std::max(row.a, d_tilde);
        return row;
    });
}

std::vector<RocPoint> roc_grid(const std::vector<double>& a_values, const std::vector<double>& tau_values,
                               double d_tilde) {
    const std::size_t nt = tau_values.size();
    return parallel_map(a_values.size() * nt, [&](std::size_t k) {
        RocPoint p;
        p.a = a_values[k / nt];
        p.tau = tau_values[k % nt];
        try {
            p.sigma = rate_of_convergence(p.a, d_tilde, p.tau);
        } catch (const NumericError& e) {
            throw GridPointError(e.what(), p.a, p.tau);
        }
        return p;
    });
}

}  // namespace movm
