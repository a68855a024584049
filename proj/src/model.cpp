#include "movm/model.hpp"

#include <cmath>
#include <string>

#include "movm/errors.hpp"

namespace movm {

void PlatoonConfig::validate() const {
    if (tau.empty()) throw ConfigError("config: at least one vehicle pair is required");
    if (tau.size() > kMaxPairs)
        throw ConfigError("config: at most " + std::to_string(kMaxPairs) + " vehicle pairs supported");
    if (!(a > 0.0) || !std::isfinite(a)) throw ConfigError("config: sensitivity a must be positive");
    for (double t : tau) {
        if (!(t >= 0.0) || !std::isfinite(t)) throw ConfigError("config: delays must be finite and >= 0");
    }
    if (!(kappa > 0.0) || !std::isfinite(kappa)) throw ConfigError("config: kappa must be positive");
    ovf.validate();
    if (!(x0_dot_eq > 0.0) || !(x0_dot_eq < ovf_vmax(ovf))) {
        throw ConfigError("config: leader equilibrium velocity must lie in (0, Vmax)");
    }
    const double vf = leader.final_velocity();
    if (std::abs(vf - x0_dot_eq) > 1e-9 * std::max(1.0, x0_dot_eq)) {
        throw ConfigError("config: leader profile settles at " + std::to_string(vf) +
                          " but x0_dot_eq is " + std::to_string(x0_dot_eq));
    }
}

Equilibrium equilibrium(const PlatoonConfig& config) {
    Equilibrium eq;
    eq.y_star = ovf_inverse(config.ovf, config.x0_dot_eq);
    eq.v_star = 0.0;
    eq.d_tilde = ovf_derivative(config.ovf, eq.y_star, 1);
    eq.d = config.a * eq.d_tilde;
    return eq;
}

DelayMatrices linearized_matrices(const PlatoonConfig& config) {
    const auto n = static_cast<Eigen::Index>(config.pairs());
    const double a = config.a;
    const double d = equilibrium(config).d;

    DelayMatrices out;
    out.delays.reserve(n + 1);
    out.matrices.reserve(n + 1);

    Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    a0.bottomLeftCorner(n, n).setIdentity();
    out.delays.push_back(0.0);
    out.matrices.push_back(std::move(a0));

    // 0-based k here is pair k + 1 in the 1-based index rules.
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::MatrixXd ak = Eigen::MatrixXd::Zero(2 * n, 2 * n);
        ak(k, k) = -a;
        ak(k, n + k) = -d;
        if (k + 1 < n) ak(k + 1, n + k) = d;
        out.delays.push_back(config.tau[k]);
        out.matrices.push_back(std::move(ak));
    }
    return out;
}

cplx characteristic_value(cplx lambda, double a, double d_tilde, double tau, double kappa) {
    const cplx e = std::exp(-lambda * tau);
    return lambda * lambda + kappa * a * lambda * e + kappa * kappa * a * d_tilde * e;
}

cplx characteristic_slope(cplx lambda, double a, double d_tilde, double tau, double kappa) {
    const cplx e = std::exp(-lambda * tau);
    const cplx inner = kappa * a * lambda + kappa * kappa * a * d_tilde;
    return 2.0 * lambda + kappa * a * e - tau * e * inner;
}

Eigen::MatrixXcd characteristic_matrix(cplx lambda, const DelayMatrices& system, double kappa) {
    const auto dim = system.matrices.front().rows();
    Eigen::MatrixXcd m = lambda * Eigen::MatrixXcd::Identity(dim, dim);
    for (std::size_t k = 0; k < system.matrices.size(); ++k) {
        m -= (kappa * std::exp(-lambda * system.delays[k])) * system.matrices[k].cast<cplx>();
    }
    return m;
}

Eigen::MatrixXcd characteristic_matrix_slope(cplx lambda, const DelayMatrices& system, double kappa) {
    const auto dim = system.matrices.front().rows();
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(dim, dim);
    for (std::size_t k = 0; k < system.matrices.size(); ++k) {
        const double tk = system.delays[k];
        m += (kappa * tk * std::exp(-lambda * tk)) * system.matrices[k].cast<cplx>();
    }
    return m;
}

void model_rhs(const PlatoonConfig& config, const DelayedState& state, std::span<double> dv,
               std::span<double> dy) {
    const std::size_t n = config.pairs();
    const double ka = config.kappa * config.a;
    const auto& ovf = config.ovf;
    for (std::size_t i = 0; i < n; ++i) {
        const double own = ovf_value_clamped(ovf, state.y_delayed[i]) + state.v_delayed[i];
        if (i == 0) {
            dv[i] = state.leader_acceleration + ka * (state.leader_velocity_delayed - own);
        } else {
            dv[i] = ka * (ovf_value_clamped(ovf, state.y_delayed[i - 1]) - own);
        }
        dy[i] = config.kappa * state.v_now[i];
    }
}

}  // namespace movm
