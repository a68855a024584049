#pragma once

#include <cstddef>

#include "movm/model.hpp"

// Reference platoons used by the CLI presets, the tests and the acceptance
// harness. Each builds V0 from the target equilibrium headway.
namespace movm::scenarios {

// Bando, ym = 1, y_tilde = 5, y* = 2, leader speed 5. Single pair.
PlatoonConfig chart_bando(double a, double tau);

// Four pairs, a = 1.2, Bando ym = 1, y_tilde = 5, y* = 3, leader 5 (1 - e^{-10 t}).
// Delays tau_cr {1/10, 1/3, factor, 1/2}; pair 3 sits at the boundary when factor = 1.
PlatoonConfig onset_platoon(double factor = 1.0);

// Four pairs, a = 2, Bando ym = 15, y_tilde = 25, y* = 15, leader 25 (1 - e^{-10 t}).
// Delays tau_noc {1/10, 1/3, 1/2, 1/5}.
PlatoonConfig nonoscillatory_platoon();

struct BifurcationSetup {
    PlatoonConfig config;
    std::size_t pair = 0;  // 0-based designated pair
};

// Four pairs, a = 1.2, Bando ym = 2, y_tilde = 5, leader 5 (1 - e^{-10 t}).
// Base delays {0.2, 0.2, 0.3911, 0.2} are rescaled so pair 3 sits at tau_cr(y*).
BifurcationSetup bifurcation_bando(double y_star);

// Three pairs, a = 1.2, Underwood ym = 2, leader 5 (1 - e^{-10 t}).
// Base delays {0.1, 0.11885, 0.1} are rescaled so pair 2 sits at tau_cr(y*).
BifurcationSetup bifurcation_underwood(double y_star);

}  // namespace movm::scenarios
