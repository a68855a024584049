#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "movm/model.hpp"

namespace movm {

// Per-pair Taylor coefficients of the delayed OVF terms about y*:
//   own term       Omega^(k) = -kappa a V^(k)(y*)
//   upstream term  zeta^(k)  = +kappa a V^(k)(y*), zero for the first pair
struct TaylorCoefficients {
    std::vector<double> omega1, omega2, omega3;
    std::vector<double> zeta1, zeta2, zeta3;
};

TaylorCoefficients taylor_coefficients(const PlatoonConfig& config, const Equilibrium& eq, double kappa);

// Right eigenvector of the generator at j omega0: q(theta) = q0 e^{j omega0 theta},
// scaled so that the designated pair's v component is 1.
struct EigvecData {
    Eigen::VectorXcd q0;
    double residual = 0.0;              // |Delta(j omega0) q0| / |q0|
    std::vector<double> block_moduli;   // |p_i(j omega0)| for every pair
    double singular_gap = 0.0;          // second-smallest singular value of Delta(j omega0)
};

// Left eigenvector row p0 with p0 Delta(j omega0) = 0 and p0 Delta'(j omega0) q0 = 1,
// so that the bilinear form <p, q> equals 1.
struct AdjointData {
    Eigen::RowVectorXcd p0;
    double residual = 0.0;  // |p0 Delta(j omega0)| / |p0|
};

// c_plus e^{j w theta} + c_minus e^{-j w theta} + c_double e^{2 j w theta} + c_const
struct ThetaVector {
    double omega = 0.0;
    Eigen::VectorXcd c_plus, c_minus, c_double, c_const;

    Eigen::VectorXcd operator()(double theta) const;
};

struct GCoefficients {
    cplx g20, g02, g11, g21;
    Eigen::VectorXcd f20, f02, f11, f21;  // nonlinear forcing vectors (zero on headway rows)
};

struct WVectors {
    ThetaVector w20, w11;
    Eigen::VectorXcd e;  // Delta(2 j omega0) e = f20
    Eigen::VectorXcd f;  // Delta(0) f = f11
};

struct HopfSystem {
    std::size_t pair = 0;
    double kappa = 0.0;   // kappa_cr of the designated pair
    double omega = 0.0;   // omega0
    Equilibrium eq;
    DelayMatrices matrices;
};

HopfSystem hopf_system(const PlatoonConfig& config, std::size_t pair);

EigvecData eigenvector_q(const HopfSystem& sys);
AdjointData adjoint_eigenvector_p(const HopfSystem& sys, const EigvecData& q);

// Quadratic coefficients only (g21 left at zero, f21 empty).
GCoefficients g_quadratic(const HopfSystem& sys, const TaylorCoefficients& taylor, const EigvecData& q,
                          const AdjointData& p);

WVectors w_vectors(const HopfSystem& sys, const EigvecData& q, const GCoefficients& g);

// Fills g21 and f21 from the centre-manifold correction.
void g_cubic(const HopfSystem& sys, const TaylorCoefficients& taylor, const EigvecData& q,
             const AdjointData& p, const WVectors& w, GCoefficients& g);

// Bilinear form <psi, phi> for psi(s) = psi0 e^{-lambda_psi s} on [0, tau_max] and
// phi(theta) = phi0 e^{lambda_phi theta} on [-tau_max, 0], integrated by
// 64-point Gauss-Legendre on each delay interval.
cplx bilinear_form(const HopfSystem& sys, const Eigen::RowVectorXcd& psi0, cplx lambda_psi,
                   const Eigen::VectorXcd& phi0, cplx lambda_phi);

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

struct NormalFormDiagnostics {
    double q_residual = 0.0;
    double p_residual = 0.0;
    cplx pq = 0.0;       // <p, q> by quadrature
    cplx pq_bar = 0.0;   // <p, conj q> by quadrature
    std::vector<double> block_moduli;
    double singular_gap = 0.0;
    double modulus_at_zero = 0.0;        // min_i |p_i(0)|
    double modulus_at_double = 0.0;      // min_i |p_i(2 j omega0)|
    cplx dlambda_dkappa_matrix = 0.0;    // from the 2N-dimensional problem
};

struct NormalFormResult {
    std::size_t pair = 0;
    double kappa_cr = 0.0;
    double omega0 = 0.0;
    TaylorCoefficients taylor;
    EigvecData eigvec;
    AdjointData adjoint;
    GCoefficients g;
    WVectors w;
    cplx c1 = 0.0;
    double alpha_prime = 0.0;
    double mu2 = 0.0;
    double beta2 = 0.0;
    bool classified = false;
    bool supercritical = false;
    bool orbitally_stable = false;
    // Predicted v amplitude of the designated pair is amplitude_coefficient * sqrt(kappa - kappa_cr).
    double amplitude_coefficient = 0.0;
    NormalFormDiagnostics diagnostics;
};

// Throws AssumptionViolation when another pair shares the critical frequency
// or Delta(0), Delta(2 j omega0) is singular.
NormalFormResult normal_form(const PlatoonConfig& config, std::size_t pair);

// Copy of config with the designated pair's delay set to tau_cr, so kappa_cr = 1.
PlatoonConfig tune_to_boundary(PlatoonConfig config, std::size_t pair);

}  // namespace movm
