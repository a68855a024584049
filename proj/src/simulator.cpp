#include "movm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "movm/errors.hpp"
#include "movm/parallel.hpp"
#include "movm/stability.hpp"

namespace movm {

namespace {

struct StepPlan {
    long steps = 0;
    std::vector<long> delay_steps;
    long max_delay = 0;
};

StepPlan plan_steps(const PlatoonConfig& config, const SimulationOptions& options) {
    if (!(options.ts > 0.0)) throw ConfigError("simulate: Ts must be positive");
    if (!(options.horizon > 0.0)) throw ConfigError("simulate: horizon must be positive");
    if (options.stride == 0) throw ConfigError("simulate: stride must be >= 1");
    const double max_tau = *std::max_element(config.tau.begin(), config.tau.end());
    if (!(options.horizon > max_tau)) throw ConfigError("simulate: horizon must exceed the largest delay");
    StepPlan plan;
    plan.steps = std::lround(options.horizon / options.ts);
    for (double t : config.tau) {
        plan.delay_steps.push_back(std::lround(t / options.ts));
        plan.max_delay = std::max(plan.max_delay, plan.delay_steps.back());
    }
    return plan;
}

InitialState resolve_initial(const PlatoonConfig& config, const SimulationOptions& options, double y_star) {
    const std::size_t n = config.pairs();
    if (!options.initial) return {std::vector<double>(n, 0.0), std::vector<double>(n, y_star)};
    const InitialState& s = *options.initial;
    if (s.v.size() != n || s.y.size() != n)
        throw ConfigError("simulate: initial state must have one v and one y per pair");
    return s;
}

Trajectory make_trajectory(const SimulationOptions& options, const StepPlan& plan, std::size_t pairs) {
    Trajectory traj;
    traj.ts = options.ts;
    traj.stride = options.stride;
    traj.horizon = static_cast<double>(plan.steps) * options.ts;
    traj.delay_steps = plan.delay_steps;
    for (long d : plan.delay_steps) traj.delay_realised.push_back(static_cast<double>(d) * options.ts);
    const auto samples = static_cast<std::size_t>(plan.steps / static_cast<long>(options.stride)) + 1;
    traj.t.reserve(samples);
    traj.leader_v.reserve(samples);
    traj.v.assign(pairs, {});
    traj.y.assign(pairs, {});
    for (std::size_t i = 0; i < pairs; ++i) {
        traj.v[i].reserve(samples);
        traj.y[i].reserve(samples);
    }
    return traj;
}

// Ring buffer holding the last max_delay + 1 states of every pair.
class History {
public:
    History(std::size_t pairs, long max_delay, const InitialState& initial)
        : len_(max_delay + 1), pairs_(pairs), initial_(initial),
          v_(pairs * static_cast<std::size_t>(len_)), y_(v_.size()) {}

    void store(long step, std::span<const double> v, std::span<const double> y) {
        const auto slot = static_cast<std::size_t>(step % len_) * pairs_;
        std::copy(v.begin(), v.end(), v_.begin() + static_cast<long>(slot));
        std::copy(y.begin(), y.end(), y_.begin() + static_cast<long>(slot));
    }
    double v(long step, std::size_t i) const {
        if (step < 0) return initial_.v[i];
        return v_[static_cast<std::size_t>(step % len_) * pairs_ + i];
    }
    double y(long step, std::size_t i) const {
        if (step < 0) return initial_.y[i];
        return y_[static_cast<std::size_t>(step % len_) * pairs_ + i];
    }

private:
    long len_;
    std::size_t pairs_;
    InitialState initial_;
    std::vector<double> v_;
    std::vector<double> y_;
};

void check_blow_up(std::span<const double> v, std::span<const double> y, double limit, double t) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(std::abs(v[i]) <= limit) || !(std::abs(y[i]) <= limit)) {
            throw BlowUpError("simulate: state of pair " + std::to_string(i + 1) + " ran away at t = " +
                                  std::to_string(t) + " s",
                              t);
        }
    }
}

}  // namespace

Trajectory simulate(const PlatoonConfig& config, const SimulationOptions& options) {
    config.validate();
    const StepPlan plan = plan_steps(config, options);
    const std::size_t n = config.pairs();
    const Equilibrium eq = equilibrium(config);
    const InitialState init = resolve_initial(config, options, eq.y_star);

    Trajectory traj = make_trajectory(options, plan, n);
    History hist(n, plan.max_delay, init);

    std::vector<double> v = init.v, y = init.y;
    std::vector<double> vd(n), yd(n), dv(n), dy(n);
    const double ts = options.ts;
    const long stride = static_cast<long>(options.stride);

    for (long step = 0;; ++step) {
        const double t = static_cast<double>(step) * ts;
        hist.store(step, v, y);
        for (std::size_t i = 0; i < n; ++i) {
            if (y[i] <= 0.0 && !traj.collision) {
                traj.collision = true;
                traj.first_collision_time = t;
            }
        }
        if (step % stride == 0) {
            traj.t.push_back(t);
            traj.leader_v.push_back(config.leader.velocity(t));
            for (std::size_t i = 0; i < n; ++i) {
                traj.v[i].push_back(v[i]);
                traj.y[i].push_back(y[i]);
            }
        }
        if (step == plan.steps) break;

        for (std::size_t i = 0; i < n; ++i) {
            const long back = step - plan.delay_steps[i];
            vd[i] = hist.v(back, i);
            yd[i] = hist.y(back, i);
        }
        DelayedState state{v, vd, yd,
                           config.leader.velocity(t - static_cast<double>(plan.delay_steps[0]) * ts),
                           config.leader.acceleration(t)};
        model_rhs(config, state, dv, dy);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] += ts * dv[i];
            y[i] += ts * dy[i];
        }
        check_blow_up(v, y, options.blow_up, t + ts);
    }
    return traj;
}

Trajectory simulate_linear(const PlatoonConfig& config, const SimulationOptions& options) {
    config.validate();
    const StepPlan plan = plan_steps(config, options);
    const std::size_t n = config.pairs();
    const Equilibrium eq = equilibrium(config);
    const InitialState init = resolve_initial(config, options, eq.y_star);
    const DelayMatrices sys = linearized_matrices(config);

    // Work in deviation coordinates u = y - y*.
    InitialState dev = init;
    for (double& yi : dev.y) yi -= eq.y_star;

    Trajectory traj = make_trajectory(options, plan, n);
    History hist(n, plan.max_delay, dev);

    Eigen::VectorXd x(2 * n), xd(2 * n), rate(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
        x(static_cast<Eigen::Index>(i)) = dev.v[i];
        x(static_cast<Eigen::Index>(n + i)) = dev.y[i];
    }
    std::vector<long> delay_steps{0};
    delay_steps.insert(delay_steps.end(), plan.delay_steps.begin(), plan.delay_steps.end());
    const double ts = options.ts;
    const long stride = static_cast<long>(options.stride);
    std::vector<double> vs(n), us(n);

    for (long step = 0;; ++step) {
        const double t = static_cast<double>(step) * ts;
        for (std::size_t i = 0; i < n; ++i) {
            vs[i] = x(static_cast<Eigen::Index>(i));
            us[i] = x(static_cast<Eigen::Index>(n + i));
        }
        hist.store(step, vs, us);
        if (step % stride == 0) {
            traj.t.push_back(t);
            traj.leader_v.push_back(config.x0_dot_eq);
            for (std::size_t i = 0; i < n; ++i) {
                traj.v[i].push_back(vs[i]);
                traj.y[i].push_back(eq.y_star + us[i]);
            }
        }
        if (step == plan.steps) break;

        rate.setZero();
        for (std::size_t k = 0; k < sys.matrices.size(); ++k) {
            const long back = step - delay_steps[k];
            for (std::size_t i = 0; i < n; ++i) {
                xd(static_cast<Eigen::Index>(i)) = hist.v(back, i);
                xd(static_cast<Eigen::Index>(n + i)) = hist.y(back, i);
            }
            rate.noalias() += sys.matrices[k] * xd;
        }
        x += (ts * config.kappa) * rate;
        for (std::size_t i = 0; i < n; ++i) {
            vs[i] = x(static_cast<Eigen::Index>(i));
            us[i] = x(static_cast<Eigen::Index>(n + i));
        }
        check_blow_up(vs, us, options.blow_up, t + ts);
    }
    return traj;
}

namespace {

std::size_t window_start(const Trajectory& trajectory, std::size_t pair, double settle_fraction) {
    if (pair >= trajectory.pairs()) throw DomainError("vehicle pair index out of range");
    if (!(settle_fraction >= 0.0) || !(settle_fraction < 1.0))
        throw DomainError("settle_fraction must lie in [0, 1)");
    return static_cast<std::size_t>(settle_fraction * static_cast<double>(trajectory.samples()));
}

double half_range(const std::vector<double>& x, std::size_t begin, std::size_t end) {
    const auto [lo, hi] = std::minmax_element(x.begin() + static_cast<long>(begin), x.begin() + static_cast<long>(end));
    return 0.5 * (*hi - *lo);
}

}  // namespace

double limit_cycle_amplitude(const Trajectory& trajectory, std::size_t pair, double settle_fraction) {
    const std::size_t begin = window_start(trajectory, pair, settle_fraction);
    const std::size_t end = trajectory.samples();
    if (end - begin < 4) throw DomainError("limit_cycle_amplitude: retained window too short");
    const auto& v = trajectory.v[pair];
    const double amplitude = half_range(v, begin, end);
    if (2.0 * amplitude < 1e-6) return 0.0;
    // Quarters rather than halves: a decaying transient followed by a growing
    // cycle can give equal half-window ranges around the envelope minimum.
    const std::size_t span = end - begin;
    double lo = amplitude;
    double hi = 0.0;
    double first = 0.0;
    double last = 0.0;
    for (std::size_t q = 0; q < 4; ++q) {
        const double r = half_range(v, begin + q * span / 4, begin + (q + 1) * span / 4);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
        if (q == 0) first = r;
        last = r;
    }
    if (hi - lo > 0.05 * hi) {
        throw NonStationaryError("limit_cycle_amplitude: amplitude drifts from " + std::to_string(first) +
                                     " to " + std::to_string(last),
                                 last);
    }
    return amplitude;
}

std::size_t oscillation_count(const Trajectory& trajectory, std::size_t pair, double transient_cut,
                              double y_star, double deadband) {
    if (pair >= trajectory.pairs()) throw DomainError("vehicle pair index out of range");
    const auto& y = trajectory.y[pair];
    std::size_t count = 0;
    int last = 0;
    for (std::size_t k = 0; k < trajectory.samples(); ++k) {
        if (trajectory.t[k] < transient_cut) continue;
        const double e = y[k] - y_star;
        if (std::abs(e) <= deadband) continue;
        const int s = e > 0.0 ? 1 : -1;
        if (last != 0 && s != last) ++count;
        last = s;
    }
    return count;
}

double cycle_frequency(const Trajectory& trajectory, std::size_t pair, double settle_fraction) {
    const std::size_t begin = window_start(trajectory, pair, settle_fraction);
    const auto& v = trajectory.v[pair];
    const std::size_t end = trajectory.samples();
    double mean = 0.0;
    for (std::size_t k = begin; k < end; ++k) mean += v[k];
    mean /= static_cast<double>(end - begin);
    std::vector<double> crossings;
    for (std::size_t k = begin + 1; k < end; ++k) {
        const double p = v[k - 1] - mean;
        const double q = v[k] - mean;
        if (p < 0.0 && q >= 0.0) {
            const double w = p / (p - q);
            crossings.push_back(trajectory.t[k - 1] + w * (trajectory.t[k] - trajectory.t[k - 1]));
        }
    }
    if (crossings.size() < 3) throw NumericError("cycle_frequency: too few crossings in the window");
    const double span = crossings.back() - crossings.front();
    return 2.0 * std::numbers::pi * static_cast<double>(crossings.size() - 1) / span;
}

std::vector<BifurcationPoint> bifurcation_diagram(const PlatoonConfig& config,
                                                  const std::vector<double>& kappa_values,
                                                  const BifurcationOptions& options) {
    config.validate();
    if (options.pair >= config.pairs()) throw ConfigError("bifurcation: vehicle pair index out of range");
    const Equilibrium eq = equilibrium(config);
    const HopfPoint hp = hopf_point(config.a, eq.d_tilde, config.tau[options.pair]);
    const double base = std::max(options.min_horizon, 400.0 / hp.omega0);
    // Amplitudes relax towards the cycle at about 2 Re(dlambda/dkappa) |kappa - kappa_cr|;
    // allow eight relaxation times, capped at eight base horizons.
    const double alpha = crossing_velocity(config.a, eq.d_tilde, config.tau[options.pair]).real();
    auto horizon_for = [&](double kappa) {
        const double gap = std::abs(kappa - hp.kappa_cr);
        const double relax = gap > 0.0 && alpha > 0.0 ? 4.0 / (alpha * gap) : 8.0 * base;
        return std::max(base, std::min(relax, 8.0 * base));
    };

    return parallel_map(kappa_values.size(), [&](std::size_t i) {
        BifurcationPoint point;
        point.kappa = kappa_values[i];
        point.horizon = horizon_for(point.kappa);
        try {
            PlatoonConfig c = config;
            c.kappa = point.kappa;
            SimulationOptions sim;
            sim.ts = options.ts;
            sim.stride = options.stride;
            // Near onset the approach to the cycle is slow; lengthen the run
            // until the amplitude settles or the extension budget is spent.
            for (std::size_t attempt = 0; attempt <= options.max_doublings; ++attempt) {
                sim.horizon = point.horizon;
                const Trajectory traj = simulate(c, sim);
                point.collision = traj.collision;
                try {
                    point.amplitude = limit_cycle_amplitude(traj, options.pair, options.settle_fraction);
                    point.status = "ok";
                    break;
                } catch (const NonStationaryError& e) {
                    point.amplitude = e.amplitude();
                    point.status = "non_stationary";
                }
                if (attempt < options.max_doublings) point.horizon *= 2.0;
            }
        } catch (const BlowUpError&) {
            point.status = "blow_up";
        } catch (const Error& e) {
            point.status = std::string("error: ") + e.what();
        }
        return point;
    });
}

}  // namespace movm
