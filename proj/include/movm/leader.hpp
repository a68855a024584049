#pragma once

#include <utility>
#include <variant>
#include <vector>

namespace movm {

// x0'(t) = v_inf (1 - exp(-rate t))
struct SmoothExponential {
    double v_inf = 5.0;
    double rate = 10.0;
};

struct ConstantVelocity {
    double v = 5.0;
};

// Velocity knots (t, v), t strictly increasing; held constant after the last
// knot and before the first.
struct PiecewiseLinear {
    std::vector<std::pair<double, double>> knots;
};

// Lead-vehicle velocity profile. For t < 0 the profile is held at its t = 0
// value, matching the constant pre-history of the followers.
class LeaderProfile {
public:
    using Variant = std::variant<SmoothExponential, ConstantVelocity, PiecewiseLinear>;

    LeaderProfile() : profile_(ConstantVelocity{}) {}
    LeaderProfile(Variant profile);  // NOLINT(google-explicit-constructor)

    double velocity(double t) const;
    double acceleration(double t) const;
    double final_velocity() const;

    const Variant& variant() const noexcept { return profile_; }

private:
    Variant profile_;
};

}  // namespace movm
