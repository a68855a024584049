#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace movm {

// Uniformly sampled simulation output. Samples are every `stride` integration
// steps, so the sample spacing is ts * stride.
struct Trajectory {
    double ts = 1e-4;
    std::size_t stride = 1;
    double horizon = 0.0;
    std::vector<double> t;
    std::vector<std::vector<double>> v;  // v[i][k]: pair i at sample k
    std::vector<std::vector<double>> y;
    std::vector<double> leader_v;

    // Integer delay in steps per pair, and the delay it actually realises.
    std::vector<long> delay_steps;
    std::vector<double> delay_realised;
    std::string history_policy = "constant";
    bool collision = false;
    double first_collision_time = -1.0;

    std::size_t pairs() const noexcept { return v.size(); }
    std::size_t samples() const noexcept { return t.size(); }
    double sample_spacing() const noexcept { return ts * static_cast<double>(stride); }
};

}  // namespace movm
