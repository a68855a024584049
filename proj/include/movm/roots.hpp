#pragma once

#include <complex>
#include <vector>

namespace movm::roots {

using cplx = std::complex<double>;

// f(lambda) = lambda^2 + b1 lambda + b0 + (c1 lambda + c0) e^{-lambda tau}
//
// Covers the per-pair characteristic equation (b1 = b0 = 0) and its
// sigma-shifted form used for the rate of convergence. It is the
// characteristic function of the scalar delay equation
//   x'' + b1 x' + b0 x + c1 x'(t - tau) + c0 x(t - tau) = 0.
struct QuasiPolynomial {
    double b1 = 0.0;
    double b0 = 0.0;
    double c1 = 0.0;
    double c0 = 0.0;
    double tau = 0.0;

    cplx value(cplx lambda) const;
    cplx slope(cplx lambda) const;

    // Radius containing every root with Re(lambda) >= sigma_floor.
    double root_radius(double sigma_floor) const;

    // Delay-free case: both roots of the quadratic.
    std::vector<cplx> quadratic_roots() const;
};

// MOVM pair: lambda^2 + kappa a lambda e^{-lambda tau} + kappa^2 a d_tilde e^{-lambda tau}
QuasiPolynomial pair_characteristic(double a, double d_tilde, double tau, double kappa);

struct Rectangle {
    double re_lo, re_hi, im_lo, im_hi;
};

// Number of zeros of f strictly inside the rectangle, by accumulating
// arg f along its boundary with adaptive steps. Throws NumericError if the
// winding number is not close to an integer.
int count_zeros(const QuasiPolynomial& f, const Rectangle& box);

struct ApOptions {
    double tolerance = 1e-10;     // bracket width on the real part
    double min_half_height = 0.0; // lower bound for the contour half-height
};

// Real part of the rightmost root by bisection on the left edge of the
// counting rectangle.
double rightmost_real_part_argument(const QuasiPolynomial& f, const ApOptions& options = {});

// True iff f has no zero with Re(lambda) >= 0.
bool all_roots_left(const QuasiPolynomial& f, double min_half_height = 0.0);

// Eigenvalues of the Chebyshev pseudospectral discretisation of the
// infinitesimal generator with `nodes` + 1 collocation points on [-tau, 0].
std::vector<cplx> spectral_eigenvalues(const QuasiPolynomial& f, int nodes);

struct SpectralRoot {
    cplx coarse;   // rightmost eigenvalue at the base resolution
    cplx fine;     // rightmost eigenvalue at double resolution
    cplx polished; // Newton refinement of `fine` on f
};

// Rightmost root from the discretised generator at two resolutions.
// Throws NumericError if the resolutions disagree by more than 1e-4.
SpectralRoot rightmost_root_spectral(const QuasiPolynomial& f, int nodes = 0);

// Newton iteration on f; returns the start point unchanged if it diverges.
cplx newton_polish(const QuasiPolynomial& f, cplx start, int max_iter = 50);

}  // namespace movm::roots
