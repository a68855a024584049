#include "movm/leader.hpp"

#include <cmath>

#include "movm/errors.hpp"

namespace movm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

LeaderProfile::LeaderProfile(Variant profile) : profile_(std::move(profile)) {
    std::visit(overloaded{
                   [](const SmoothExponential& p) {
                       if (!(p.v_inf > 0.0) || !(p.rate > 0.0))
                           throw ConfigError("leader: smooth_exponential needs v_inf > 0 and rate > 0");
                   },
                   [](const ConstantVelocity& p) {
                       if (!(p.v > 0.0)) throw ConfigError("leader: constant velocity must be > 0");
                   },
                   [](const PiecewiseLinear& p) {
                       if (p.knots.empty()) throw ConfigError("leader: piecewise_linear needs knots");
                       for (std::size_t i = 1; i < p.knots.size(); ++i) {
                           if (!(p.knots[i].first > p.knots[i - 1].first))
                               throw ConfigError("leader: knot times must be strictly increasing");
                       }
                       if (!(p.knots.back().second > 0.0))
                           throw ConfigError("leader: final knot velocity must be > 0");
                   },
               },
               profile_);
}

double LeaderProfile::velocity(double t) const {
    t = std::max(t, 0.0);
    return std::visit(overloaded{
                          [t](const SmoothExponential& p) { return p.v_inf * (1.0 - std::exp(-p.rate * t)); },
                          [](const ConstantVelocity& p) { return p.v; },
                          [t](const PiecewiseLinear& p) {
                              const auto& k = p.knots;
                              if (t <= k.front().first) return k.front().second;
                              if (t >= k.back().first) return k.back().second;
                              std::size_t i = 1;
                              while (k[i].first < t) ++i;
                              const double w = (t - k[i - 1].first) / (k[i].first - k[i - 1].first);
                              return k[i - 1].second + w * (k[i].second - k[i - 1].second);
                          },
                      },
                      profile_);
}

double LeaderProfile::acceleration(double t) const {
    if (t < 0.0) return 0.0;
    return std::visit(overloaded{
                          [t](const SmoothExponential& p) { return p.v_inf * p.rate * std::exp(-p.rate * t); },
                          [](const ConstantVelocity&) { return 0.0; },
                          [t](const PiecewiseLinear& p) {
                              const auto& k = p.knots;
                              if (t < k.front().first || t >= k.back().first) return 0.0;
                              std::size_t i = 1;
                              while (k[i].first <= t) ++i;
                              return (k[i].second - k[i - 1].second) / (k[i].first - k[i - 1].first);
                          },
                      },
                      profile_);
}

double LeaderProfile::final_velocity() const {
    return std::visit(overloaded{
                          [](const SmoothExponential& p) { return p.v_inf; },
                          [](const ConstantVelocity& p) { return p.v; },
                          [](const PiecewiseLinear& p) { return p.knots.back().second; },
                      },
                      profile_);
}

}  // namespace movm
