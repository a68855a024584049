#include "movm/roots.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Dense>

#include "movm/errors.hpp"

namespace movm::roots {

namespace {

constexpr double kPi = std::numbers::pi;

double heuristic_half_height(const QuasiPolynomial& f) {
    const double scale =
        std::sqrt(std::abs(f.b0) + std::abs(f.c0)) + std::abs(f.b1) + std::abs(f.c1);
    double omega = 4.0 * scale;
    if (f.tau > 0.0) omega += 10.0 / f.tau;
    return std::max(omega, 1.0);
}

// Accumulated change of arg f along the segment [z0, z1].
double phase_change(const QuasiPolynomial& f, cplx z0, cplx z1, double step_fraction) {
    const cplx dir = z1 - z0;
    const double length = std::abs(dir);
    if (length == 0.0) return 0.0;
    const cplx unit = dir / length;
    const double max_step = length / 16.0;
    const double min_step = 1e-15 * std::max(1.0, std::abs(z0) + std::abs(z1));

    double s = 0.0;
    double total = 0.0;
    cplx z = z0;
    cplx fz = f.value(z);
    while (s < length) {
        const double mag = std::abs(fz);
        if (!(mag > 0.0) || !std::isfinite(mag))
            throw NumericError("argument principle: f vanishes on the contour");
        const double slope = std::abs(f.slope(z));
        double h = max_step;
        if (slope > 0.0) h = std::min(h, step_fraction * mag / slope);
        h = std::min(h, length - s);
        while (true) {
            const bool last = s + h >= length - min_step;
            if (h < min_step && !last) throw NumericError("argument principle: step underflow near a zero");
            const cplx zn = last ? z1 : z + unit * h;
            const cplx fn = f.value(zn);
            const double d = std::arg(fn / fz);
            if (std::abs(d) <= 0.5) {
                total += d;
                z = zn;
                fz = fn;
                s = last ? length : s + h;
                break;
            }
            h *= 0.5;
        }
    }
    return total;
}

// Chebyshev differentiation matrix on x_j = cos(j pi / m), j = 0..m.
Eigen::MatrixXd chebyshev_matrix(int m) {
    Eigen::VectorXd x(m + 1);
    Eigen::VectorXd c(m + 1);
    for (int j = 0; j <= m; ++j) {
        x(j) = std::cos(kPi * j / m);
        c(j) = ((j == 0 || j == m) ? 2.0 : 1.0) * ((j % 2 == 0) ? 1.0 : -1.0);
    }
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(m + 1, m + 1);
    for (int i = 0; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            if (i != j) d(i, j) = (c(i) / c(j)) / (x(i) - x(j));
        }
    }
    for (int i = 0; i <= m; ++i) d(i, i) = -d.row(i).sum();
    return d;
}

cplx rightmost_of(const std::vector<cplx>& values) {
    if (values.empty()) throw NumericError("spectral discretisation produced no eigenvalues");
    // Conjugate pairs tie on the real part; report the one with Im >= 0.
    cplx best = values.front();
    for (const cplx& v : values) {
        if (v.real() > best.real() + 1e-12 ||
            (std::abs(v.real() - best.real()) <= 1e-12 && v.imag() > best.imag()))
            best = v;
    }
    return best;
}

}  // namespace

cplx QuasiPolynomial::value(cplx lambda) const {
    const cplx e = std::exp(-lambda * tau);
    return lambda * lambda + b1 * lambda + b0 + (c1 * lambda + c0) * e;
}

cplx QuasiPolynomial::slope(cplx lambda) const {
    const cplx e = std::exp(-lambda * tau);
    return 2.0 * lambda + b1 + (c1 - tau * (c1 * lambda + c0)) * e;
}

double QuasiPolynomial::root_radius(double sigma_floor) const {
    // On Re(lambda) >= sigma_floor, |e^{-lambda tau}| <= e^{-sigma_floor tau}, so a root obeys
    // |lambda|^2 <= A |lambda| + C.
    const double e = std::exp(-sigma_floor * tau);
    const double a = std::abs(b1) + std::abs(c1) * e;
    const double c = std::abs(b0) + std::abs(c0) * e;
    return 0.5 * (a + std::sqrt(a * a + 4.0 * c));
}

std::vector<cplx> QuasiPolynomial::quadratic_roots() const {
    // tau = 0: lambda^2 + (b1 + c1) lambda + (b0 + c0)
    const double p = b1 + c1;
    const double q = b0 + c0;
    const cplx disc = std::sqrt(cplx(p * p - 4.0 * q, 0.0));
    // Avoid cancellation in the smaller root.
    const cplx big = -0.5 * (p + (p >= 0.0 ? disc : -disc));
    if (big == cplx(0.0, 0.0)) return {cplx(0.0, 0.0), cplx(0.0, 0.0)};
    return {big, q / big};
}

QuasiPolynomial pair_characteristic(double a, double d_tilde, double tau, double kappa) {
    QuasiPolynomial f;
    f.c1 = kappa * a;
    f.c0 = kappa * kappa * a * d_tilde;
    f.tau = tau;
    return f;
}

int count_zeros(const QuasiPolynomial& f, const Rectangle& box) {
    if (!(box.re_hi > box.re_lo) || !(box.im_hi > box.im_lo))
        throw NumericError("count_zeros: empty rectangle");
    const cplx corners[4] = {{box.re_lo, box.im_lo},
                             {box.re_hi, box.im_lo},
                             {box.re_hi, box.im_hi},
                             {box.re_lo, box.im_hi}};
    double fraction = 0.25;
    for (int attempt = 0; attempt < 3; ++attempt) {
        double total = 0.0;
        for (int k = 0; k < 4; ++k) total += phase_change(f, corners[k], corners[(k + 1) % 4], fraction);
        const double winding = total / (2.0 * kPi);
        const double rounded = std::round(winding);
        if (std::abs(winding - rounded) < 0.05 && rounded >= 0.0) return static_cast<int>(rounded);
        fraction *= 0.25;
    }
    throw NumericError("count_zeros: winding number did not settle to an integer");
}

namespace {

// Counts zeros in [left, right] x [-omega, omega], nudging the left edge if
// it happens to pass through a zero.
int count_right_of(const QuasiPolynomial& f, double left, double right, double omega,
                   double nudge) {
    for (int k = 0; k < 8; ++k) {
        try {
            return count_zeros(f, {left, right, -omega, omega});
        } catch (const NumericError&) {
            left -= nudge;
            nudge *= 2.0;
        }
    }
    throw NumericError("argument principle: contour keeps hitting zeros");
}

}  // namespace

double rightmost_real_part_argument(const QuasiPolynomial& f, const ApOptions& options) {
    if (f.tau == 0.0) {
        const auto r = f.quadratic_roots();
        return std::max(r[0].real(), r[1].real());
    }
    // No zero has Re >= hi once R(hi) < hi.
    double hi = std::max(1.0, f.root_radius(0.0));
    while (f.root_radius(hi) >= hi) hi *= 2.0;
    hi += 1.0;

    double lo = -1.0;
    double omega = 0.0;
    for (int k = 0;; ++k) {
        if (k > 40) throw NumericError("argument principle: no zero found in any left half-plane");
        omega = std::max({heuristic_half_height(f), options.min_half_height,
                          1.05 * f.root_radius(lo) + 1.0});
        if (count_right_of(f, lo, hi, omega, 1e-9) > 0) break;
        lo = 2.0 * lo - 1.0;
    }

    // Invariant: a zero lies in Re >= lo, none in Re >= hi.
    double top = hi;
    while (top - lo > options.tolerance) {
        const double mid = 0.5 * (lo + top);
        // The nudge floor keeps a shifted edge well clear of the step-size floor
        // of phase_change; the bracket is then off by at most a few nudges.
        const double nudge = std::max(1e-3 * (top - lo), 1e-13 * (omega + std::abs(hi) + std::abs(lo)));
        if (count_right_of(f, mid, hi, omega, nudge) > 0) {
            lo = mid;
        } else {
            top = mid;
        }
    }
    return 0.5 * (lo + top);
}

bool all_roots_left(const QuasiPolynomial& f, double min_half_height) {
    if (f.tau == 0.0) {
        const auto r = f.quadratic_roots();
        return std::max(r[0].real(), r[1].real()) < 0.0;
    }
    double hi = std::max(1.0, f.root_radius(0.0));
    while (f.root_radius(hi) >= hi) hi *= 2.0;
    hi += 1.0;
    const double omega =
        std::max({heuristic_half_height(f), min_half_height, 1.05 * f.root_radius(0.0) + 1.0});
    // A zero exactly on the axis counts as "not left": shift the edge slightly left.
    try {
        return count_zeros(f, {0.0, hi, -omega, omega}) == 0;
    } catch (const NumericError&) {
        return false;
    }
}

std::vector<cplx> spectral_eigenvalues(const QuasiPolynomial& f, int nodes) {
    if (f.tau == 0.0) return f.quadratic_roots();
    if (nodes < 2) throw NumericError("spectral_eigenvalues: need at least 2 nodes");
    const int m = nodes;
    const int n = 2 * (m + 1);
    // State [x, x'] on theta_j = tau (x_j - 1) / 2; theta_0 = 0, theta_m = -tau.
    const Eigen::MatrixXd d = chebyshev_matrix(m) * (2.0 / f.tau);
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i <= m; ++i) {
        for (int j = 0; j <= m; ++j) {
            gen(2 * i, 2 * j) = d(i, j);
            gen(2 * i + 1, 2 * j + 1) = d(i, j);
        }
    }
    // Row block 0 carries the equation itself.
    gen(0, 1) = 1.0;
    gen(1, 0) = -f.b0;
    gen(1, 1) = -f.b1;
    gen(1, 2 * m) += -f.c0;
    gen(1, 2 * m + 1) += -f.c1;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(gen, false);
    if (solver.info() != Eigen::Success) throw NumericError("spectral_eigenvalues: eigensolver failed");
    std::vector<cplx> out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = solver.eigenvalues()(k);
    return out;
}

cplx newton_polish(const QuasiPolynomial& f, cplx start, int max_iter) {
    cplx z = start;
    for (int k = 0; k < max_iter; ++k) {
        const cplx s = f.slope(z);
        if (std::abs(s) == 0.0) break;
        const cplx step = f.value(z) / s;
        z -= step;
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return start;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(z))) break;
    }
    if (std::abs(z - start) > 1e-2 * std::max(1.0, std::abs(start))) return start;
    return z;
}

SpectralRoot rightmost_root_spectral(const QuasiPolynomial& f, int nodes) {
    if (nodes <= 0) {
        const double r = f.root_radius(0.0);
        nodes = std::max(16, static_cast<int>(std::ceil(2.0 * r * f.tau)) + 16);
    }
    SpectralRoot out;
    out.coarse = rightmost_of(spectral_eigenvalues(f, nodes));
    out.fine = rightmost_of(spectral_eigenvalues(f, 2 * nodes));
    if (std::abs(out.coarse.real() - out.fine.real()) > 1e-4)
        throw NumericError("pseudospectral resolutions disagree: " + std::to_string(out.coarse.real()) +
                           " vs " + std::to_string(out.fine.real()));
    out.polished = newton_polish(f, out.fine);
    return out;
}

}  // namespace movm::roots
