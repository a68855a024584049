#pragma once

#include <chrono>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "movm/hopf.hpp"
#include "movm/model.hpp"
#include "movm/simulator.hpp"
#include "movm/stability.hpp"

namespace movm::io {

using nlohmann::json;

inline constexpr const char* kToolVersion = "1.0.0";

// 12 significant digits, the fixed format of every CSV cell.
std::string format_number(double x);

json to_json(const OvfSpec& spec);
OvfSpec ovf_from_json(const json& j);

json to_json(const LeaderProfile& leader);
LeaderProfile leader_from_json(const json& j);

// A config may give "y_star" instead of ovf.v0; V0 is then scaled so that
// V(y_star) = x0_dot_eq. Unknown keys are rejected at every level.
json to_json(const PlatoonConfig& config);
PlatoonConfig config_from_json(const json& j);
PlatoonConfig load_config(const std::string& path);

json to_json(cplx z);
json to_json(const Eigen::VectorXcd& v);
json to_json(const NormalFormResult& result);
json to_json(const StabilityReport& report);

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);
json trajectory_metadata(const PlatoonConfig& config, const Trajectory& trajectory);

void write_chart_csv(std::ostream& out, const std::vector<ChartRow>& rows);
void write_roc_csv(std::ostream& out, const std::vector<RocPoint>& points);
void write_bifurcation_csv(std::ostream& out, const std::vector<BifurcationPoint>& points);

struct RunManifest {
    std::string command;
    json config;
    std::vector<std::string> outputs;
    double wall_seconds = 0.0;
};

json to_json(const RunManifest& manifest);

}  // namespace movm::io
