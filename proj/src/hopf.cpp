#include "movm/hopf.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "movm/errors.hpp"
#include "movm/stability.hpp"

namespace movm {

namespace {

constexpr cplx kJ(0.0, 1.0);

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

}  // namespace

Eigen::VectorXcd ThetaVector::operator()(double theta) const {
    const cplx e = std::exp(kJ * omega * theta);
    return c_plus * e + c_minus * std::conj(e) + c_double * (e * e) + c_const;
}

TaylorCoefficients taylor_coefficients(const PlatoonConfig& config, const Equilibrium& eq, double kappa) {
    const std::size_t n = config.pairs();
    const double ka = kappa * config.a;
    const double v1 = ovf_derivative(config.ovf, eq.y_star, 1);
    const double v2 = ovf_derivative(config.ovf, eq.y_star, 2);
    const double v3 = ovf_derivative(config.ovf, eq.y_star, 3);
    TaylorCoefficients t;
    t.omega1.assign(n, -ka * v1);
    t.omega2.assign(n, -ka * v2);
    t.omega3.assign(n, -ka * v3);
    t.zeta1.assign(n, ka * v1);
    t.zeta2.assign(n, ka * v2);
    t.zeta3.assign(n, ka * v3);
    t.zeta1[0] = t.zeta2[0] = t.zeta3[0] = 0.0;
    return t;
}

HopfSystem hopf_system(const PlatoonConfig& config, std::size_t pair) {
    config.validate();
    if (pair >= config.pairs()) throw ConfigError("hopf: vehicle pair index out of range");
    HopfSystem sys;
    sys.pair = pair;
    sys.eq = equilibrium(config);
    const HopfPoint hp = hopf_point(config.a, sys.eq.d_tilde, config.tau[pair]);
    sys.kappa = hp.kappa_cr;
    sys.omega = hp.omega0;
    sys.matrices = linearized_matrices(config);
    return sys;
}

EigvecData eigenvector_q(const HopfSystem& sys) {
    const std::size_t n = sys.matrices.matrices.size() - 1;
    const cplx lambda = kJ * sys.omega;
    const Eigen::MatrixXcd delta = characteristic_matrix(lambda, sys.matrices, sys.kappa);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(delta, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto last = delta.cols() - 1;

    EigvecData out;
    out.q0 = svd.matrixV().col(last);
    const cplx lead = out.q0(idx(sys.pair));
    if (std::abs(lead) < 1e-12)
        throw AssumptionViolation("hopf: critical eigenvector has no component on the designated pair");
    out.q0 /= lead;
    out.residual = (delta * out.q0).norm() / out.q0.norm();
    out.singular_gap = svd.singularValues()(last - 1);
    const double d_tilde = sys.eq.d_tilde;
    const double a = sys.eq.d / d_tilde;
    for (std::size_t i = 0; i < n; ++i) {
        out.block_moduli.push_back(
            std::abs(characteristic_value(lambda, a, d_tilde, sys.matrices.delays[i + 1], sys.kappa)));
    }
    return out;
}

AdjointData adjoint_eigenvector_p(const HopfSystem& sys, const EigvecData& q) {
    const cplx lambda = kJ * sys.omega;
    const Eigen::MatrixXcd delta = characteristic_matrix(lambda, sys.matrices, sys.kappa);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(delta, Eigen::ComputeFullU | Eigen::ComputeFullV);
    AdjointData out;
    out.p0 = svd.matrixU().col(delta.cols() - 1).adjoint();
    const cplx norm = (out.p0 * characteristic_matrix_slope(lambda, sys.matrices, sys.kappa) * q.q0)(0);
    if (std::abs(norm) < 1e-14) throw AssumptionViolation("hopf: critical eigenvalue is not simple");
    out.p0 /= norm;
    out.residual = (out.p0 * delta).norm() / out.p0.norm();
    return out;
}

namespace {

// Headway components u_i(-tau_i) of c e^{lambda theta}.
std::vector<cplx> delayed_headways(const HopfSystem& sys, const Eigen::VectorXcd& c, cplx lambda) {
    const std::size_t n = sys.matrices.matrices.size() - 1;
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i)
        out[i] = c(idx(n + i)) * std::exp(-lambda * sys.matrices.delays[i + 1]);
    return out;
}

std::vector<cplx> delayed_headways(const HopfSystem& sys, const ThetaVector& w) {
    const std::size_t n = sys.matrices.matrices.size() - 1;
    std::vector<cplx> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = w(-sys.matrices.delays[i + 1])(idx(n + i));
    return out;
}

// Row i gets coef_own[i] * term(i) + coef_up[i] * term(i - 1).
template <class Term>
Eigen::VectorXcd forcing(std::size_t n, const std::vector<double>& own, const std::vector<double>& up, Term term) {
    Eigen::VectorXcd f = Eigen::VectorXcd::Zero(idx(2 * n));
    for (std::size_t i = 0; i < n; ++i) {
        f(idx(i)) = own[i] * term(i);
        if (i > 0) f(idx(i)) += up[i] * term(i - 1);
    }
    return f;
}

}  // namespace

GCoefficients g_quadratic(const HopfSystem& sys, const TaylorCoefficients& taylor, const EigvecData& q,
                          const AdjointData& p) {
    const std::size_t n = sys.matrices.matrices.size() - 1;
    const auto qd = delayed_headways(sys, q.q0, kJ * sys.omega);
    GCoefficients g;
    g.f20 = forcing(n, taylor.omega2, taylor.zeta2, [&](std::size_t i) { return qd[i] * qd[i]; });
    g.f11 = forcing(n, taylor.omega2, taylor.zeta2, [&](std::size_t i) { return cplx(std::norm(qd[i])); });
    g.f02 = forcing(n, taylor.omega2, taylor.zeta2,
                    [&](std::size_t i) { return std::conj(qd[i]) * std::conj(qd[i]); });
    g.g20 = (p.p0 * g.f20)(0);
    g.g11 = (p.p0 * g.f11)(0);
    g.g02 = (p.p0 * g.f02)(0);
    g.g21 = 0.0;
    return g;
}

WVectors w_vectors(const HopfSystem& sys, const EigvecData& q, const GCoefficients& g) {
    const double w = sys.omega;
    const Eigen::MatrixXcd at_double = characteristic_matrix(2.0 * kJ * w, sys.matrices, sys.kappa);
    const Eigen::MatrixXcd at_zero = characteristic_matrix(0.0, sys.matrices, sys.kappa);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu_double(at_double);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu_zero(at_zero);
    if (!lu_double.isInvertible()) throw AssumptionViolation("hopf: Delta(2 j omega0) is singular");
    if (!lu_zero.isInvertible()) throw AssumptionViolation("hopf: Delta(0) is singular");

    WVectors out;
    out.e = lu_double.solve(g.f20);
    out.f = lu_zero.solve(g.f11);
    const Eigen::VectorXcd qbar = q.q0.conjugate();
    const auto dim = q.q0.size();

    out.w20.omega = w;
    out.w20.c_plus = (kJ * g.g20 / w) * q.q0;
    out.w20.c_minus = (kJ * std::conj(g.g02) / (3.0 * w)) * qbar;
    out.w20.c_double = out.e;
    out.w20.c_const = Eigen::VectorXcd::Zero(dim);

    out.w11.omega = w;
    out.w11.c_plus = (-kJ * g.g11 / w) * q.q0;
    out.w11.c_minus = (kJ * std::conj(g.g11) / w) * qbar;
    out.w11.c_double = Eigen::VectorXcd::Zero(dim);
    out.w11.c_const = out.f;
    return out;
}

void g_cubic(const HopfSystem& sys, const TaylorCoefficients& taylor, const EigvecData& q,
             const AdjointData& p, const WVectors& w, GCoefficients& g) {
    const std::size_t n = sys.matrices.matrices.size() - 1;
    const auto qd = delayed_headways(sys, q.q0, kJ * sys.omega);
    const auto w20 = delayed_headways(sys, w.w20);
    const auto w11 = delayed_headways(sys, w.w11);
    const Eigen::VectorXcd quad = forcing(n, taylor.omega2, taylor.zeta2, [&](std::size_t i) {
        return std::conj(qd[i]) * w20[i] + 2.0 * qd[i] * w11[i];
    });
    const Eigen::VectorXcd cubic = forcing(n, taylor.omega3, taylor.zeta3,
                                           [&](std::size_t i) { return qd[i] * qd[i] * std::conj(qd[i]); });
    g.f21 = quad + cubic;
    g.g21 = (p.p0 * g.f21)(0);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(static_cast<std::size_t>(n), 0.0);
    weights.assign(static_cast<std::size_t>(n), 0.0);
    const auto un = static_cast<unsigned>(n);
    for (int k = 0; k < n; ++k) {
        double x = std::cos(std::numbers::pi * (k + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            const double p = std::legendre(un, x);
            dp = n * (x * p - std::legendre(un - 1, x)) / (x * x - 1.0);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        dp = n * (x * std::legendre(un, x) - std::legendre(un - 1, x)) / (x * x - 1.0);
        nodes[static_cast<std::size_t>(k)] = x;
        weights[static_cast<std::size_t>(k)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
}

cplx bilinear_form(const HopfSystem& sys, const Eigen::RowVectorXcd& psi0, cplx lambda_psi,
                   const Eigen::VectorXcd& phi0, cplx lambda_phi) {
    static const auto rule = [] {
        std::pair<std::vector<double>, std::vector<double>> r;
        gauss_legendre(64, r.first, r.second);
        return r;
    }();
    cplx total = (psi0 * phi0)(0);
    for (std::size_t k = 0; k < sys.matrices.matrices.size(); ++k) {
        const double tk = sys.matrices.delays[k];
        if (tk == 0.0) continue;
        const cplx coupling = (psi0 * (sys.kappa * sys.matrices.matrices[k]).cast<cplx>() * phi0)(0);
        if (coupling == cplx(0.0)) continue;
        cplx integral = 0.0;
        for (std::size_t m = 0; m < rule.first.size(); ++m) {
            const double xi = 0.5 * tk * (rule.first[m] - 1.0);
            integral += rule.second[m] * std::exp(-lambda_psi * (xi + tk)) * std::exp(lambda_phi * xi);
        }
        total += coupling * (0.5 * tk) * integral;
    }
    return total;
}

NormalFormResult normal_form(const PlatoonConfig& config, std::size_t pair) {
    const HopfSystem sys = hopf_system(config, pair);
    const std::size_t n = config.pairs();
    const double a = config.a;
    const double d_tilde = sys.eq.d_tilde;

    NormalFormResult r;
    r.pair = pair;
    r.kappa_cr = sys.kappa;
    r.omega0 = sys.omega;
    r.taylor = taylor_coefficients(config, sys.eq, sys.kappa);
    r.eigvec = eigenvector_q(sys);

    auto& diag = r.diagnostics;
    diag.block_moduli = r.eigvec.block_moduli;
    diag.singular_gap = r.eigvec.singular_gap;
    diag.modulus_at_zero = std::numeric_limits<double>::infinity();
    diag.modulus_at_double = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double tau = config.tau[i];
        diag.modulus_at_zero = std::min(diag.modulus_at_zero, std::abs(characteristic_value(0.0, a, d_tilde, tau, sys.kappa)));
        diag.modulus_at_double = std::min(
            diag.modulus_at_double, std::abs(characteristic_value(2.0 * kJ * sys.omega, a, d_tilde, tau, sys.kappa)));
        if (i != pair && r.eigvec.block_moduli[i] <= 1e-10) {
            throw AssumptionViolation("hopf: pair " + std::to_string(i + 1) +
                                      " also has a root at j omega0 (non-simple critical eigenvalue)");
        }
    }
    if (diag.modulus_at_zero <= 1e-10) throw AssumptionViolation("hopf: zero is a characteristic root");
    if (diag.modulus_at_double <= 1e-10)
        throw AssumptionViolation("hopf: 2 j omega0 is a characteristic root (strong resonance)");

    r.adjoint = adjoint_eigenvector_p(sys, r.eigvec);
    diag.q_residual = r.eigvec.residual;
    diag.p_residual = r.adjoint.residual;
    const cplx lambda = kJ * sys.omega;
    diag.pq = bilinear_form(sys, r.adjoint.p0, lambda, r.eigvec.q0, lambda);
    diag.pq_bar = bilinear_form(sys, r.adjoint.p0, lambda, r.eigvec.q0.conjugate(), -lambda);

    Eigen::MatrixXcd dkappa = Eigen::MatrixXcd::Zero(idx(2 * n), idx(2 * n));
    for (std::size_t k = 0; k < sys.matrices.matrices.size(); ++k)
        dkappa += std::exp(-lambda * sys.matrices.delays[k]) * sys.matrices.matrices[k].cast<cplx>();
    diag.dlambda_dkappa_matrix = (r.adjoint.p0 * dkappa * r.eigvec.q0)(0);

    r.g = g_quadratic(sys, r.taylor, r.eigvec, r.adjoint);
    r.w = w_vectors(sys, r.eigvec, r.g);
    g_cubic(sys, r.taylor, r.eigvec, r.adjoint, r.w, r.g);

    const cplx g20 = r.g.g20, g11 = r.g.g11, g02 = r.g.g02, g21 = r.g.g21;
    r.c1 = (kJ / (2.0 * sys.omega)) * (g20 * g11 - 2.0 * std::norm(g11) - std::norm(g02) / 3.0) + g21 / 2.0;
    r.alpha_prime = crossing_velocity(a, d_tilde, config.tau[pair]).real();
    r.beta2 = 2.0 * r.c1.real();
    r.mu2 = -r.c1.real() / r.alpha_prime;
    r.classified = std::abs(r.c1.real()) >= 1e-10;
    if (r.classified) {
        r.supercritical = r.mu2 > 0.0;
        r.orbitally_stable = r.beta2 < 0.0;
    }
    if (r.mu2 > 0.0) r.amplitude_coefficient = 2.0 / std::sqrt(r.mu2);
    return r;
}

PlatoonConfig tune_to_boundary(PlatoonConfig config, std::size_t pair) {
    config.validate();
    if (pair >= config.pairs()) throw ConfigError("hopf: vehicle pair index out of range");
    config.tau[pair] = critical_delay(config.a, equilibrium(config).d_tilde);
    return config;
}

}  // namespace movm
