#include "movm/ovf.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "movm/errors.hpp"

namespace movm {

namespace {

double require(const std::optional<double>& field, const char* name, OvfFamily family) {
    if (!field) {
        throw ConfigError(std::string("ovf: family '") + std::string(to_string(family)) +
                          "' requires '" + name + "'");
    }
    return *field;
}

void check_domain(const OvfSpec& spec, double y) {
    if (!std::isfinite(y) || y < 0.0) {
        throw DomainError("ovf: headway must be finite and non-negative, got " + std::to_string(y));
    }
    if (spec.family == OvfFamily::underwood && y == 0.0) {
        throw DomainError("ovf: Underwood OVF is undefined at y = 0");
    }
}

// Derivatives of the Hyperbolic family for s = y - y0 > 0.
// V = V0 (1 - c^n / h), h = c^n + s^n.
double hyperbolic_derivative(double v0, double c, int n, double s, int order) {
    const double cn = std::pow(c, n);
    const double h = cn + std::pow(s, n);
    const double h1 = n * std::pow(s, n - 1);
    const double h2 = n >= 2 ? n * (n - 1) * std::pow(s, n - 2) : 0.0;
    const double h3 = n >= 3 ? n * (n - 1) * (n - 2) * std::pow(s, n - 3) : 0.0;
    double inv = 0.0;  // derivative of 1/h
    switch (order) {
        case 1: inv = -h1 / (h * h); break;
        case 2: inv = -h2 / (h * h) + 2.0 * h1 * h1 / (h * h * h); break;
        case 3:
            inv = -h3 / (h * h) + 6.0 * h1 * h2 / (h * h * h) - 6.0 * h1 * h1 * h1 / (h * h * h * h);
            break;
    }
    return -v0 * cn * inv;
}

}  // namespace

std::string_view to_string(OvfFamily family) {
    switch (family) {
        case OvfFamily::underwood: return "underwood";
        case OvfFamily::bando: return "bando";
        case OvfFamily::trigonometric: return "trigonometric";
        case OvfFamily::hyperbolic: return "hyperbolic";
    }
    return "unknown";
}

OvfFamily ovf_family_from_string(std::string_view name) {
    if (name == "underwood") return OvfFamily::underwood;
    if (name == "bando") return OvfFamily::bando;
    if (name == "trigonometric") return OvfFamily::trigonometric;
    if (name == "hyperbolic") return OvfFamily::hyperbolic;
    throw ConfigError("ovf: unknown family '" + std::string(name) + "'");
}

OvfSpec OvfSpec::underwood(double v0, double ym) {
    OvfSpec s;
    s.family = OvfFamily::underwood;
    s.v0 = v0;
    s.ym = ym;
    return s;
}

OvfSpec OvfSpec::bando(double v0, double ym, double y_tilde) {
    OvfSpec s;
    s.family = OvfFamily::bando;
    s.v0 = v0;
    s.ym = ym;
    s.y_tilde = y_tilde;
    return s;
}

OvfSpec OvfSpec::trigonometric(double v0, double ym, double y_tilde) {
    OvfSpec s = bando(v0, ym, y_tilde);
    s.family = OvfFamily::trigonometric;
    return s;
}

OvfSpec OvfSpec::hyperbolic(double v0, double y0, double y_tilde, int n) {
    OvfSpec s;
    s.family = OvfFamily::hyperbolic;
    s.v0 = v0;
    s.y0 = y0;
    s.y_tilde = y_tilde;
    s.n = n;
    return s;
}

void OvfSpec::validate() const {
    if (!(v0 > 0.0) || !std::isfinite(v0)) throw ConfigError("ovf: v0 must be positive");
    switch (family) {
        case OvfFamily::underwood:
            if (!(require(ym, "ym", family) > 0.0)) throw ConfigError("ovf: ym must be positive");
            break;
        case OvfFamily::bando:
        case OvfFamily::trigonometric:
            if (!(require(ym, "ym", family) > 0.0)) throw ConfigError("ovf: ym must be positive");
            if (!(require(y_tilde, "y_tilde", family) > 0.0))
                throw ConfigError("ovf: y_tilde must be positive");
            break;
        case OvfFamily::hyperbolic:
            if (!(require(y0, "y0", family) >= 0.0)) throw ConfigError("ovf: y0 must be >= 0");
            if (!(require(y_tilde, "y_tilde", family) > 0.0))
                throw ConfigError("ovf: y_tilde must be positive");
            if (!n || *n < 1) throw ConfigError("ovf: hyperbolic family requires integer n >= 1");
            break;
    }
}

double ovf_value(const OvfSpec& spec, double y) {
    check_domain(spec, y);
    const double v0 = spec.v0;
    switch (spec.family) {
        case OvfFamily::underwood: return v0 * std::exp(-2.0 * *spec.ym / y);
        case OvfFamily::bando: {
            const double c = *spec.y_tilde;
            return v0 * (std::tanh((y - *spec.ym) / c) + std::tanh(*spec.ym / c));
        }
        case OvfFamily::trigonometric: {
            const double c = *spec.y_tilde;
            return v0 * (std::atan((y - *spec.ym) / c) + std::atan(*spec.ym / c));
        }
        case OvfFamily::hyperbolic: {
            const double s = y - *spec.y0;
            if (s <= 0.0) return 0.0;
            const double sn = std::pow(s, *spec.n);
            return v0 * sn / (std::pow(*spec.y_tilde, *spec.n) + sn);
        }
    }
    return 0.0;
}

double ovf_derivative(const OvfSpec& spec, double y, int order) {
    if (order < 1 || order > 3) throw DomainError("ovf: derivative order must be 1, 2 or 3");
    check_domain(spec, y);
    const double v0 = spec.v0;
    switch (spec.family) {
        case OvfFamily::underwood: {
            const double b = 2.0 * *spec.ym;
            const double e = v0 * std::exp(-b / y);
            const double y2 = y * y;
            if (order == 1) return e * b / y2;
            if (order == 2) return e * (b * b / (y2 * y2) - 2.0 * b / (y2 * y));
            return e * (b * b * b / (y2 * y2 * y2) - 6.0 * b * b / (y2 * y2 * y) + 6.0 * b / (y2 * y2));
        }
        case OvfFamily::bando: {
            const double c = *spec.y_tilde;
            const double t = std::tanh((y - *spec.ym) / c);
            const double sech2 = 1.0 - t * t;
            if (order == 1) return v0 / c * sech2;
            if (order == 2) return v0 / (c * c) * (-2.0 * t * sech2);
            return v0 / (c * c * c) * sech2 * (6.0 * t * t - 2.0);
        }
        case OvfFamily::trigonometric: {
            const double c = *spec.y_tilde;
            const double s = (y - *spec.ym) / c;
            const double w = 1.0 + s * s;
            if (order == 1) return v0 / c / w;
            if (order == 2) return v0 / (c * c) * (-2.0 * s) / (w * w);
            return v0 / (c * c * c) * (6.0 * s * s - 2.0) / (w * w * w);
        }
        case OvfFamily::hyperbolic: {
            const double s = y - *spec.y0;
            if (s <= 0.0) return 0.0;
            return hyperbolic_derivative(v0, *spec.y_tilde, *spec.n, s, order);
        }
    }
    return 0.0;
}

double ovf_vmax(const OvfSpec& spec) {
    switch (spec.family) {
        case OvfFamily::underwood:
        case OvfFamily::hyperbolic: return spec.v0;
        case OvfFamily::bando: return spec.v0 * (1.0 + std::tanh(*spec.ym / *spec.y_tilde));
        case OvfFamily::trigonometric:
            return spec.v0 * (std::numbers::pi / 2.0 + std::atan(*spec.ym / *spec.y_tilde));
    }
    return spec.v0;
}

double ovf_inverse(const OvfSpec& spec, double v) {
    const double vmax = ovf_vmax(spec);
    if (!(v > 0.0) || !(v < vmax)) {
        throw RangeError("ovf: inverse requires 0 < v < Vmax = " + std::to_string(vmax) +
                         ", got " + std::to_string(v));
    }
    switch (spec.family) {
        case OvfFamily::underwood: return -2.0 * *spec.ym / std::log(v / spec.v0);
        case OvfFamily::bando: {
            const double c = *spec.y_tilde;
            return *spec.ym + c * std::atanh(v / spec.v0 - std::tanh(*spec.ym / c));
        }
        case OvfFamily::trigonometric:
        case OvfFamily::hyperbolic: break;
    }

    // Monotone bisection; grow the upper bracket until it straddles v.
    double lo = spec.family == OvfFamily::hyperbolic ? *spec.y0 : 0.0;
    double step = spec.y_tilde.value_or(1.0);
    double hi = lo + step;
    while (ovf_value(spec, hi) <= v) {
        lo = hi;
        step *= 2.0;
        hi = lo + step;
        if (!std::isfinite(hi)) throw NumericError("ovf: inverse bracket diverged");
    }
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (ovf_value(spec, mid) < v) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

OvfSpec with_equilibrium(OvfSpec shape, double y_star, double velocity) {
    shape.v0 = 1.0;
    shape.validate();
    const double unit = ovf_value(shape, y_star);
    if (!(unit > 0.0)) {
        throw ConfigError("ovf: cannot scale V0, V(y*) = 0 for the unit-V0 shape");
    }
    shape.v0 = velocity / unit;
    return shape;
}

double ovf_value_clamped(const OvfSpec& spec, double y) {
    if (y <= 0.0) return 0.0;
    return ovf_value(spec, y);
}

}  // namespace movm
