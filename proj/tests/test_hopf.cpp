#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>

#include "movm/errors.hpp"
#include "movm/hopf.hpp"
#include "movm/scenarios.hpp"
#include "movm/stability.hpp"

using namespace movm;

namespace {

constexpr cplx kJ(0.0, 1.0);

// Symmetric multilinear forms of the delayed OVF differences, evaluated on
// exponential functions c e^{lambda theta}. Built straight from the model
// equations, independently of the library's forcing vectors.
struct Forms {
    const PlatoonConfig& c;
    double kappa;
    double v2, v3;
    std::size_t n;

    cplx head(const Eigen::VectorXcd& x, cplx lx, std::size_t i) const {
        return x(static_cast<Eigen::Index>(n + i)) * std::exp(-lx * c.tau[i]);
    }
    Eigen::VectorXcd B(const Eigen::VectorXcd& x, cplx lx, const Eigen::VectorXcd& y, cplx ly) const {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(2 * n));
        for (std::size_t i = 0; i < n; ++i) {
            cplx r = -head(x, lx, i) * head(y, ly, i);
            if (i > 0) r += head(x, lx, i - 1) * head(y, ly, i - 1);
            out(static_cast<Eigen::Index>(i)) = kappa * c.a * v2 * r;
        }
        return out;
    }
    Eigen::VectorXcd C(const Eigen::VectorXcd& x, cplx lx, const Eigen::VectorXcd& y, cplx ly,
                       const Eigen::VectorXcd& z, cplx lz) const {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(2 * n));
        for (std::size_t i = 0; i < n; ++i) {
            cplx r = -head(x, lx, i) * head(y, ly, i) * head(z, lz, i);
            if (i > 0) r += head(x, lx, i - 1) * head(y, ly, i - 1) * head(z, lz, i - 1);
            out(static_cast<Eigen::Index>(i)) = kappa * c.a * v3 * r;
        }
        return out;
    }
};

// First Lyapunov coefficient via the characteristic-matrix projection:
// c1 = 1/2 p [C(q,q,qb) + B(qb, h20) + 2 B(q, h11)].
cplx projection_c1(const PlatoonConfig& config, std::size_t pair) {
    const auto sys = hopf_system(config, pair);
    const double w = sys.omega;
    const cplx lam = kJ * w;
    const Eigen::MatrixXcd d = characteristic_matrix(lam, sys.matrices, sys.kappa);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(d);
    Eigen::VectorXcd q = lu.kernel().col(0);
    q /= q(static_cast<Eigen::Index>(pair));  // c1 scales with |q|^2; match the library's normalisation
    Eigen::FullPivLU<Eigen::MatrixXcd> lut(d.transpose());
    Eigen::RowVectorXcd p = lut.kernel().col(0).transpose();
    p /= (p * characteristic_matrix_slope(lam, sys.matrices, sys.kappa) * q)(0);
    const double ys = sys.eq.y_star;
    Forms f{config, sys.kappa, ovf_derivative(config.ovf, ys, 2), ovf_derivative(config.ovf, ys, 3), config.pairs()};
    const Eigen::VectorXcd qb = q.conjugate();
    const Eigen::VectorXcd h20 =
        characteristic_matrix(2.0 * lam, sys.matrices, sys.kappa).fullPivLu().solve(f.B(q, lam, q, lam));
    const Eigen::VectorXcd h11 =
        characteristic_matrix(0.0, sys.matrices, sys.kappa).fullPivLu().solve(f.B(q, lam, qb, -lam));
    const Eigen::VectorXcd sum = f.C(q, lam, q, lam, qb, -lam) + f.B(qb, -lam, h20, 2.0 * lam) +
                                 2.0 * f.B(q, lam, h11, 0.0);
    return 0.5 * (p * sum)(0);
}

// L phi = kappa sum_k A_k phi(-tau_k).
Eigen::VectorXcd apply_generator(const HopfSystem& sys, const ThetaVector& phi) {
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(phi.c_plus.size());
    for (std::size_t k = 0; k < sys.matrices.matrices.size(); ++k)
        out += sys.kappa * sys.matrices.matrices[k].cast<cplx>() * phi(-sys.matrices.delays[k]);
    return out;
}

Eigen::VectorXcd theta_derivative(const ThetaVector& v, double theta) {
    const cplx e = std::exp(kJ * v.omega * theta);
    return kJ * v.omega * (v.c_plus * e - v.c_minus * std::conj(e) + 2.0 * v.c_double * e * e);
}

}  // namespace

TEST_CASE("Taylor coefficients") {
    const auto s = scenarios::bifurcation_underwood(2.0);
    const auto eq = equilibrium(s.config);
    const auto t = taylor_coefficients(s.config, eq, 1.3);
    const double h = 1e-5;
    const double fd = (ovf_value(s.config.ovf, 2.0 + h) - ovf_value(s.config.ovf, 2.0 - h)) / (2.0 * h);
    CHECK(t.omega1[1] == doctest::Approx(-1.3 * 1.2 * fd).epsilon(1e-8));
    CHECK(t.omega1[0] < 0.0);
    CHECK(t.zeta1[0] == 0.0);
    CHECK(t.zeta2[0] == 0.0);
    CHECK(t.zeta3[0] == 0.0);
    CHECK(t.zeta1[2] == doctest::Approx(-t.omega1[2]));
    // Bando has its inflection at ym.
    const auto b = scenarios::bifurcation_bando(2.0);
    CHECK(std::abs(taylor_coefficients(b.config, equilibrium(b.config), 1.0).omega2[0]) < 1e-12);
}

TEST_CASE("eigenvectors solve the characteristic system") {
    for (double ys : {1.0, 2.0, 3.0}) {
        for (const auto& s : {scenarios::bifurcation_bando(ys), scenarios::bifurcation_underwood(ys)}) {
            const auto r = normal_form(s.config, s.pair);
            CHECK(r.diagnostics.q_residual < 1e-8);
            CHECK(r.diagnostics.p_residual < 1e-8);
            CHECK(r.eigvec.q0(static_cast<Eigen::Index>(s.pair)) == cplx(1.0));
            CHECK(std::abs(r.diagnostics.pq - 1.0) < 1e-8);
            CHECK(std::abs(r.diagnostics.pq_bar) < 1e-8);
            // Upstream pairs do not move on the critical mode; downstream ones do not feed back.
            for (std::size_t i = 0; i < s.pair; ++i) {
                CHECK(std::abs(r.eigvec.q0(static_cast<Eigen::Index>(i))) < 1e-10);
            }
            const auto n = s.config.pairs();
            for (std::size_t i = s.pair + 1; i < n; ++i)
                CHECK(std::abs(r.adjoint.p0(static_cast<Eigen::Index>(i))) < 1e-10);
            CHECK(std::abs(r.diagnostics.dlambda_dkappa_matrix -
                           crossing_velocity(s.config.a, equilibrium(s.config).d_tilde, s.config.tau[s.pair])) <
                  1e-8);
        }
    }
}

TEST_CASE("two-pair eigenvector by hand") {
    PlatoonConfig c = scenarios::onset_platoon(1.0);
    c.tau = {0.2, 0.25};
    const auto eq = equilibrium(c);
    const auto r = normal_form(c, 0);
    const double w = r.omega0, k = r.kappa_cr, a = c.a, d = eq.d;
    const cplx e1 = std::exp(-kJ * w * 0.2), e2 = std::exp(-kJ * w * 0.25);
    const cplx u1 = k / (kJ * w);
    const cplx v2 = k * d * e1 * u1 / (kJ * w + k * a * e2 + k * k * d * e2 / (kJ * w));
    const auto& q = r.eigvec.q0;
    CHECK(std::abs(q(0) - 1.0) < 1e-12);
    CHECK(std::abs(q(2) - u1) < 1e-10);
    CHECK(std::abs(q(1) - v2) < 1e-10);
    CHECK(std::abs(q(3) - k * v2 / (kJ * w)) < 1e-10);
}

TEST_CASE("forcing vectors vanish on headway rows") {
    const auto s = scenarios::bifurcation_bando(3.0);
    const auto r = normal_form(s.config, s.pair);
    const auto n = static_cast<Eigen::Index>(s.config.pairs());
    for (Eigen::Index i = n; i < 2 * n; ++i) {
        CHECK(r.g.f20(i) == cplx(0.0));
        CHECK(r.g.f11(i) == cplx(0.0));
        CHECK(r.g.f21(i) == cplx(0.0));
    }
}

TEST_CASE("w20 and w11 satisfy their operator equations") {
    for (const auto& s : {scenarios::bifurcation_bando(3.0), scenarios::bifurcation_underwood(2.0)}) {
        const auto sys = hopf_system(s.config, s.pair);
        const auto r = normal_form(s.config, s.pair);
        const double w = r.omega0;
        const Eigen::VectorXcd q = r.eigvec.q0, qb = q.conjugate();
        const cplx g20 = r.g.g20, g02 = r.g.g02, g11 = r.g.g11;
        const double tau = s.config.tau[s.pair];
        // Interior: dw20/dtheta = 2 j w w20 + g20 q(theta) + conj(g02) conj(q(theta)).
        for (double th : {-tau / 2.0, -tau}) {
            const cplx e = std::exp(kJ * w * th);
            const Eigen::VectorXcd res20 =
                theta_derivative(r.w.w20, th) - 2.0 * kJ * w * r.w.w20(th) - g20 * q * e - std::conj(g02) * qb * std::conj(e);
            CHECK(res20.norm() < 1e-6 * std::max(1.0, r.w.w20(th).norm()));
            const Eigen::VectorXcd res11 = theta_derivative(r.w.w11, th) - g11 * q * e - std::conj(g11) * qb * std::conj(e);
            CHECK(res11.norm() < 1e-6 * std::max(1.0, r.w.w11(th).norm()));
        }
        // Boundary: 2 j w w20(0) - L w20 = f20 - g20 q - conj(g02) conj(q).
        const Eigen::VectorXcd b20 = 2.0 * kJ * w * r.w.w20(0.0) - apply_generator(sys, r.w.w20) - r.g.f20 +
                                     g20 * q + std::conj(g02) * qb;
        CHECK(b20.norm() < 1e-6 * std::max(1.0, r.g.f20.norm()));
        const Eigen::VectorXcd b11 = -apply_generator(sys, r.w.w11) - r.g.f11 + g11 * q + std::conj(g11) * qb;
        CHECK(b11.norm() < 1e-6 * std::max(1.0, r.g.f11.norm()));
    }
}

TEST_CASE("zero quadratic forcing leaves w20 without its double-frequency part") {
    const auto s = scenarios::bifurcation_bando(2.0);  // y* = ym: V'' = 0
    const auto r = normal_form(s.config, s.pair);
    CHECK(r.g.f20.norm() < 1e-12);
    CHECK(r.w.e.norm() < 1e-12);
    CHECK(std::abs(r.g.g20) < 1e-12);
}

TEST_CASE("first Lyapunov coefficient matches the projection oracle") {
    for (double ys : {1.0, 2.0, 3.0}) {
        for (const auto& s : {scenarios::bifurcation_bando(ys), scenarios::bifurcation_underwood(ys)}) {
            const auto r = normal_form(s.config, s.pair);
            const cplx oracle = projection_c1(s.config, s.pair);
            CAPTURE(ys);
            CHECK(std::abs(r.c1 - oracle) < 1e-8 * std::max(1.0, std::abs(oracle)));
            CHECK(r.beta2 == 2.0 * r.c1.real());
            CHECK(r.mu2 == -r.c1.real() / r.alpha_prime);
            CHECK(r.alpha_prime > 0.0);
            CHECK(r.classified);
            CHECK(r.supercritical);
            CHECK(r.orbitally_stable);
            CHECK(r.amplitude_coefficient == doctest::Approx(2.0 / std::sqrt(r.mu2)));
        }
    }
}

TEST_CASE("c1 depends only on the designated pair and its own delay") {
    auto s = scenarios::bifurcation_bando(2.5);
    const auto base = normal_form(s.config, s.pair);
    std::swap(s.config.tau[0], s.config.tau[3]);
    s.config.tau[0] *= 0.7;
    s.config.tau[1] *= 1.3;
    s.config.tau[3] *= 0.5;
    const auto moved = normal_form(s.config, s.pair);
    CHECK(std::abs(moved.c1 - base.c1) < 1e-10 * std::abs(base.c1));
}

TEST_CASE("assumption violations") {
    auto s = scenarios::bifurcation_bando(2.0);
    s.config.tau[0] = s.config.tau[s.pair];  // a second pair at the same critical point
    CHECK_THROWS_AS(normal_form(s.config, s.pair), AssumptionViolation);
    CHECK_THROWS_AS(normal_form(s.config, 9), ConfigError);
}

TEST_CASE("bilinear form quadrature") {
    std::vector<double> x, wts;
    gauss_legendre(64, x, wts);
    double sum = 0.0, poly = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sum += wts[i];
        poly += wts[i] * std::pow(x[i], 10);
    }
    CHECK(sum == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(poly == doctest::Approx(2.0 / 11.0).epsilon(1e-13));
    // <p, q> against the closed form p Delta'(j w) q.
    const auto s = scenarios::bifurcation_underwood(3.0);
    const auto sys = hopf_system(s.config, s.pair);
    const auto r = normal_form(s.config, s.pair);
    const cplx lam = kJ * r.omega0;
    const cplx closed = (r.adjoint.p0 * characteristic_matrix_slope(lam, sys.matrices, sys.kappa) * r.eigvec.q0)(0);
    CHECK(std::abs(bilinear_form(sys, r.adjoint.p0, lam, r.eigvec.q0, lam) - closed) < 1e-12);
}

TEST_CASE("tuning to the boundary") {
    auto c = scenarios::onset_platoon(0.8);
    const auto tuned = tune_to_boundary(c, 2);
    CHECK(std::abs(hopf_point(c.a, equilibrium(c).d_tilde, tuned.tau[2]).kappa_cr - 1.0) < 1e-9);
    CHECK(tuned.tau[0] == c.tau[0]);
    CHECK(normal_form(tuned, 2).kappa_cr == doctest::Approx(1.0).epsilon(1e-9));
}
