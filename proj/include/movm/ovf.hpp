#pragma once

#include <optional>
#include <string_view>

namespace movm {

enum class OvfFamily { underwood, bando, trigonometric, hyperbolic };

std::string_view to_string(OvfFamily family);
OvfFamily ovf_family_from_string(std::string_view name);

// Optimal velocity function: one of the four families with its parameters.
// Which optional fields are required depends on the family:
//   underwood      v0, ym
//   bando          v0, ym, y_tilde
//   trigonometric  v0, ym, y_tilde
//   hyperbolic     v0, y0, y_tilde, n
struct OvfSpec {
    OvfFamily family = OvfFamily::bando;
    double v0 = 1.0;
    std::optional<double> ym;
    std::optional<double> y_tilde;
    std::optional<double> y0;
    std::optional<int> n;

    static OvfSpec underwood(double v0, double ym);
    static OvfSpec bando(double v0, double ym, double y_tilde);
    static OvfSpec trigonometric(double v0, double ym, double y_tilde);
    static OvfSpec hyperbolic(double v0, double y0, double y_tilde, int n);

    // Throws ConfigError when a parameter the family needs is missing or invalid.
    void validate() const;
};

// V(y). Throws DomainError for y < 0 (and y == 0 for Underwood).
double ovf_value(const OvfSpec& spec, double y);

// Closed-form V'(y), V''(y), V'''(y) for order 1, 2, 3.
double ovf_derivative(const OvfSpec& spec, double y, int order);

// lim_{y -> inf} V(y).
double ovf_vmax(const OvfSpec& spec);

// y with V(y) = v. Closed form for Underwood and Bando, bisection otherwise.
// Throws RangeError unless 0 < v < Vmax.
double ovf_inverse(const OvfSpec& spec, double v);

// V0 such that V(y_star) = velocity with the remaining parameters of `shape`.
OvfSpec with_equilibrium(OvfSpec shape, double y_star, double velocity);

// Total extension used by the simulator: V(y) for y in the domain, 0 for
// headways at or below the lower edge (collisions in the idealised model).
double ovf_value_clamped(const OvfSpec& spec, double y);

}  // namespace movm
