#include "movm/scenarios.hpp"

#include <vector>

#include "movm/stability.hpp"

namespace movm::scenarios {

namespace {

PlatoonConfig base(double a, const OvfSpec& shape, double y_star, double speed, bool ramp) {
    PlatoonConfig c;
    c.a = a;
    c.ovf = with_equilibrium(shape, y_star, speed);
    c.x0_dot_eq = speed;
    c.leader = ramp ? LeaderProfile(SmoothExponential{speed, 10.0}) : LeaderProfile(ConstantVelocity{speed});
    return c;
}

double d_tilde_of(const PlatoonConfig& c) { return equilibrium(c).d_tilde; }

BifurcationSetup rescaled(PlatoonConfig c, std::vector<double> delays, std::size_t pair) {
    c.tau = delays;
    const double tau_cr = critical_delay(c.a, d_tilde_of(c));
    const double ratio = tau_cr / delays[pair];
    for (double& t : c.tau) t *= ratio;
    c.tau[pair] = tau_cr;
    return {c, pair};
}

}  // namespace

PlatoonConfig chart_bando(double a, double tau) {
    PlatoonConfig c = base(a, OvfSpec::bando(1.0, 1.0, 5.0), 2.0, 5.0, false);
    c.tau = {tau};
    return c;
}

PlatoonConfig onset_platoon(double factor) {
    PlatoonConfig c = base(1.2, OvfSpec::bando(1.0, 1.0, 5.0), 3.0, 5.0, true);
    const double tc = critical_delay(c.a, d_tilde_of(c));
    c.tau = {tc / 10.0, tc / 3.0, factor * tc, tc / 2.0};
    return c;
}

PlatoonConfig nonoscillatory_platoon() {
    PlatoonConfig c = base(2.0, OvfSpec::bando(1.0, 15.0, 25.0), 15.0, 25.0, true);
    const auto noc = noc_boundary(c.a, d_tilde_of(c));
    const double tn = noc.value_or(critical_delay(c.a, d_tilde_of(c)));
    c.tau = {tn / 10.0, tn / 3.0, tn / 2.0, tn / 5.0};
    return c;
}

BifurcationSetup bifurcation_bando(double y_star) {
    PlatoonConfig c = base(1.2, OvfSpec::bando(1.0, 2.0, 5.0), y_star, 5.0, true);
    return rescaled(c, {0.2, 0.2, 0.3911, 0.2}, 2);
}

BifurcationSetup bifurcation_underwood(double y_star) {
    PlatoonConfig c = base(1.2, OvfSpec::underwood(1.0, 2.0), y_star, 5.0, true);
    return rescaled(c, {0.1, 0.11885, 0.1}, 1);
}

}  // namespace movm::scenarios
