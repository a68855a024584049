#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "movm/model.hpp"
#include "movm/roots.hpp"
#include "movm/trajectory.hpp"

namespace movm {

inline const double kMMinus = -2.0 - std::sqrt(2.0);
inline const double kMPlus = -2.0 + std::sqrt(2.0);

// Roots of lambda^2 + a lambda + a d_tilde all lie in Re < 0.
bool no_delay_stable(double a, double d_tilde);

// max(a, d_tilde) tau < 1
bool small_delay_sufficient(double a, double d_tilde, double tau);

// sqrt(a (a + sqrt(a^2 + 4 d_tilde^2)) / 2)
double chi(double a, double d_tilde);

// Pair is stable at kappa = 1 iff tau < critical_delay.
double critical_delay(double a, double d_tilde);

struct HopfPoint {
    double chi = 0.0;
    double omega0 = 0.0;
    double kappa_cr = 0.0;
    double tau_cr = 0.0;
};

HopfPoint hopf_point(double a, double d_tilde, double tau);

// d lambda / d kappa at (lambda, kappa) = (j omega0, kappa_cr).
cplx crossing_velocity(double a, double d_tilde, double tau);

// Re((d lambda / d kappa)^{-1}) at the crossing. Same sign as Re(d lambda / d kappa).
double transversality(double a, double d_tilde, double tau);

// The real-root boundary with m = m_minus, if it lies in (0, tau_cr).
std::optional<double> noc_boundary(double a, double d_tilde);

struct RootEstimate {
    cplx root;                    // polished rightmost root, Im >= 0
    double argument_real = 0.0;   // real part from zero counting
    roots::SpectralRoot spectral;
};

// Rightmost root of the pair characteristic by both methods. Throws
// NumericError if they disagree by more than 1e-4 in the real part.
RootEstimate rightmost_root(double a, double d_tilde, double tau, double kappa);

double rightmost_root_real_part(double a, double d_tilde, double tau, double kappa);

// Characteristic of the pair after the substitution lambda -> lambda - s / tau,
// s dimensionless. Its roots are those of the kappa = 1 pair shifted by s / tau.
roots::QuasiPolynomial shifted_characteristic(double a, double d_tilde, double tau, double s);

// Exponential decay rate (1/s) of the pair at kappa = 1; 0 for tau >= tau_cr.
double rate_of_convergence(double a, double d_tilde, double tau);

struct SettlingTimes {
    std::vector<double> per_pair;
    double total = 0.0;
};

double default_settling_band(const Equilibrium& eq, double x0_dot_eq);

SettlingTimes settling_time(const Trajectory& trajectory, double epsilon, const Equilibrium& eq);

struct PairStability {
    double tau = 0.0;
    double tau_cr = 0.0;
    std::optional<double> tau_noc;
    double sigma = 0.0;
    bool small_delay_sufficient = false;
    bool locally_stable = false;
    bool non_oscillatory = false;
};

struct StabilityReport {
    double a = 0.0;
    double d_tilde = 0.0;
    double kappa = 1.0;
    std::vector<PairStability> pairs;
    double platoon_sigma = 0.0;
    double m_minus = kMMinus;
    double m_plus = kMPlus;
};

// Per-pair analysis at the configured kappa. A pair with delay tau behaves
// as the kappa = 1 pair with delay kappa tau, time-scaled by kappa.
StabilityReport stability_report(const PlatoonConfig& config);

struct ChartRow {
    double a = 0.0;
    double d_tilde = 0.0;
    double tau_cr = 0.0;
    std::optional<double> tau_noc;
    double sigma = 0.0;
    double sc_bound = 0.0;  // 1 / max(a, d_tilde)
};

// One row per value of a; sigma is the decay rate at delay `tau`.
// Rows come back in the order of `a_values` whatever the thread count.
std::vector<ChartRow> stability_chart(const std::vector<double>& a_values, double d_tilde, double tau);

struct RocPoint {
    double a = 0.0;
    double tau = 0.0;
    double sigma = 0.0;
};

// Rate of convergence over the (a, tau) grid, row-major in a.
std::vector<RocPoint> roc_grid(const std::vector<double>& a_values, const std::vector<double>& tau_values,
                               double d_tilde);

}  // namespace movm
