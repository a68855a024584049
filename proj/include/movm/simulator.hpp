#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "movm/model.hpp"
#include "movm/trajectory.hpp"

namespace movm {

struct InitialState {
    std::vector<double> v;
    std::vector<double> y;
};

struct SimulationOptions {
    double horizon = 100.0;
    double ts = 1e-4;
    std::size_t stride = 1;
    std::optional<InitialState> initial;  // defaults to the equilibrium
    double blow_up = 1e6;
};

// Explicit Euler on the kappa-scaled nonlinear model. Delays are rounded to
// whole steps and the state before t = 0 is held at the initial state.
Trajectory simulate(const PlatoonConfig& config, const SimulationOptions& options);

// Same scheme on the linearisation about the equilibrium; the leader sits at
// its equilibrium velocity. Headways are reported as y* + u.
Trajectory simulate_linear(const PlatoonConfig& config, const SimulationOptions& options);

// Half the peak-to-peak excursion of v_pair over the samples after the first
// settle_fraction of the run. Throws NonStationaryError if the two halves of
// that window differ by more than 5%.
double limit_cycle_amplitude(const Trajectory& trajectory, std::size_t pair, double settle_fraction = 0.5);

// Sign changes of y_pair - y_star after transient_cut. Samples within the
// deadband of zero are skipped so rounding noise at equilibrium is not counted.
std::size_t oscillation_count(const Trajectory& trajectory, std::size_t pair, double transient_cut,
                              double y_star, double deadband = 1e-9);

// Angular frequency of v_pair from its upward mean crossings over the
// retained window. Throws NumericError if fewer than three crossings exist.
double cycle_frequency(const Trajectory& trajectory, std::size_t pair, double settle_fraction = 0.5);

struct BifurcationOptions {
    std::size_t pair = 0;
    double ts = 1e-4;
    std::size_t stride = 10;
    // The run length is at least max(min_horizon, 400 / omega0), lengthened to
    // cover the slow relaxation towards the cycle near kappa_cr.
    double min_horizon = 0.0;
    double settle_fraction = 0.5;
    std::size_t max_doublings = 3;  // horizon doublings allowed while the amplitude drifts
};

struct BifurcationPoint {
    double kappa = 0.0;
    double amplitude = 0.0;
    double horizon = 0.0;
    std::string status;  // "ok", "non_stationary", "blow_up", or "error: ..."
    bool collision = false;
};

// One simulation per kappa, run in parallel; points come back in input order.
std::vector<BifurcationPoint> bifurcation_diagram(const PlatoonConfig& config,
                                                  const std::vector<double>& kappa_values,
                                                  const BifurcationOptions& options);

}  // namespace movm
