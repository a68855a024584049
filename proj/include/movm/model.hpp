#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "movm/leader.hpp"
#include "movm/ovf.hpp"

namespace movm {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxPairs = 32;

// Platoon of N + 1 vehicles: the leader and N followers, i.e. N vehicle pairs.
// Pair i (0-based here, i + 1 in the usual numbering) holds the headway
// y_i = x_{i-1} - x_i and relative velocity v_i = y_i'.
struct PlatoonConfig {
    double a = 1.0;            // sensitivity (1/s)
    std::vector<double> tau;   // reaction delay per pair (s); N = tau.size()
    OvfSpec ovf;
    LeaderProfile leader;
    double kappa = 1.0;        // exogenous scaling
    double x0_dot_eq = 5.0;    // leader equilibrium velocity (m/s)

    std::size_t pairs() const noexcept { return tau.size(); }

    // Throws ConfigError on any invariant violation.
    void validate() const;
};

struct Equilibrium {
    double y_star = 0.0;
    double v_star = 0.0;
    double d_tilde = 0.0;  // V'(y*)
    double d = 0.0;        // a * d_tilde
};

Equilibrium equilibrium(const PlatoonConfig& config);

// A_0 .. A_N of the linearisation, 2N x 2N each, state ordered
// [v_1 .. v_N, u_1 .. u_N]. delays[k] is the delay attached to A_k
// (delays[0] = 0).
struct DelayMatrices {
    std::vector<double> delays;
    std::vector<Eigen::MatrixXd> matrices;
};

DelayMatrices linearized_matrices(const PlatoonConfig& config);

// lambda^2 + kappa a lambda e^{-lambda tau} + kappa^2 a d_tilde e^{-lambda tau}
cplx characteristic_value(cplx lambda, double a, double d_tilde, double tau, double kappa);

// d/dlambda of characteristic_value.
cplx characteristic_slope(cplx lambda, double a, double d_tilde, double tau, double kappa);

// lambda I - kappa sum_k A_k e^{-lambda tau_k}
Eigen::MatrixXcd characteristic_matrix(cplx lambda, const DelayMatrices& system, double kappa);

// d/dlambda of characteristic_matrix: I + kappa sum_k tau_k A_k e^{-lambda tau_k}
Eigen::MatrixXcd characteristic_matrix_slope(cplx lambda, const DelayMatrices& system, double kappa);

// Delayed samples feeding the kappa-scaled nonlinear right-hand side.
// For pair i: v_delayed[i] = v_i(t - tau_i), y_delayed[i] = y_i(t - tau_i).
struct DelayedState {
    std::span<const double> v_now;
    std::span<const double> v_delayed;
    std::span<const double> y_delayed;
    double leader_velocity_delayed = 0.0;  // x0'(t - tau_1)
    double leader_acceleration = 0.0;      // x0''(t)
};

// Writes v_i' into dv and y_i' into dy.
void model_rhs(const PlatoonConfig& config, const DelayedState& state, std::span<double> dv,
               std::span<double> dy);

}  // namespace movm
