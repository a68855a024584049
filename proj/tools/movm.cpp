// movm: command-line front end for the platoon stability, simulation and
// Hopf normal-form toolkit. Exit codes: 0 ok, 2 config, 3 numeric, 4 assumption.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "movm/errors.hpp"
#include "movm/hopf.hpp"
#include "movm/io.hpp"
#include "movm/simulator.hpp"
#include "movm/stability.hpp"

namespace {

using movm::io::json;

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitAssumption = 4;

struct Options {
    std::string config_path;
    std::string out;
    double horizon = 100.0;
    double ts = 1e-4;
    std::size_t grid = 20;
    std::size_t stride = 1;
    std::string kappa_list = "1,1.02,1.04,1.06,1.08,1.1";
    std::string a_range = "1,5";
    std::size_t vehicle = 1;
    bool at_boundary = false;
};

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size() && item.find_first_not_of(" \t", used) != std::string::npos)
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw movm::ConfigError("cannot parse number '" + item + "' in list '" + text + "'");
        }
    }
    if (out.empty()) throw movm::ConfigError("empty list '" + text + "'");
    return out;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    if (n == 0) throw movm::ConfigError("--grid must be >= 1");
    if (n == 1) return {lo};
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
    return out;
}

std::pair<double, double> parse_range(const std::string& text) {
    const auto v = parse_list(text);
    if (v.size() != 2 || !(v[0] > 0.0) || !(v[1] >= v[0]))
        throw movm::ConfigError("--a-range must be 'lo,hi' with 0 < lo <= hi");
    return {v[0], v[1]};
}

std::size_t pair_index(const Options& o, const movm::PlatoonConfig& c) {
    if (o.vehicle < 1 || o.vehicle > c.pairs())
        throw movm::ConfigError("--vehicle must lie in 1.." + std::to_string(c.pairs()));
    return o.vehicle - 1;
}

std::string require_out(const Options& o) {
    if (o.out.empty()) throw movm::ConfigError("--out is required");
    return o.out;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw movm::ConfigError("cannot write '" + path + "'");
    f << text;
}

void write_manifest(const std::string& command, const movm::PlatoonConfig& config, std::vector<std::string> outputs,
                    std::chrono::steady_clock::time_point start, const std::string& manifest_path) {
    movm::io::RunManifest m;
    m.command = command;
    m.config = movm::io::to_json(config);
    m.outputs = std::move(outputs);
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& p : m.outputs) {
        if (!std::filesystem::exists(p) || std::filesystem::file_size(p) == 0)
            throw movm::NumericError("output '" + p + "' missing or empty");
    }
    write_text(manifest_path, movm::io::to_json(m).dump(2) + "\n");
}

int cmd_stability_chart(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    const auto config = movm::io::load_config(o.config_path);
    const auto [lo, hi] = parse_range(o.a_range);
    const auto eq = movm::equilibrium(config);
    const auto rows = movm::stability_chart(linspace(lo, hi, o.grid), eq.d_tilde, config.tau.front());
    std::ostringstream csv;
    movm::io::write_chart_csv(csv, rows);
    const auto out = require_out(o);
    write_text(out, csv.str());
    write_manifest("stability-chart", config, {out}, start, out + ".manifest.json");
    return 0;
}

int cmd_report(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    const auto config = movm::io::load_config(o.config_path);
    const auto report = movm::stability_report(config);
    const auto out = require_out(o);
    write_text(out, movm::io::to_json(report).dump(2) + "\n");
    write_manifest("report", config, {out}, start, out + ".manifest.json");
    return 0;
}

int cmd_simulate(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    const auto config = movm::io::load_config(o.config_path);
    movm::SimulationOptions sim;
    sim.horizon = o.horizon;
    sim.ts = o.ts;
    sim.stride = o.stride;
    const auto traj = movm::simulate(config, sim);
    const auto prefix = require_out(o);
    std::ostringstream csv;
    movm::io::write_trajectory_csv(csv, traj);
    write_text(prefix + ".csv", csv.str());
    write_text(prefix + ".json", movm::io::trajectory_metadata(config, traj).dump(2) + "\n");
    write_manifest("simulate", config, {prefix + ".csv", prefix + ".json"}, start, prefix + ".manifest.json");
    return 0;
}

int cmd_hopf(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    auto config = movm::io::load_config(o.config_path);
    const auto pair = pair_index(o, config);
    if (o.at_boundary) config = movm::tune_to_boundary(config, pair);
    const auto result = movm::normal_form(config, pair);
    const auto out = require_out(o);
    write_text(out, movm::io::to_json(result).dump(2) + "\n");
    write_manifest("hopf", config, {out}, start, out + ".manifest.json");
    return 0;
}

int cmd_bifurcation(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    auto config = movm::io::load_config(o.config_path);
    const auto pair = pair_index(o, config);
    if (o.at_boundary) config = movm::tune_to_boundary(config, pair);
    movm::BifurcationOptions bo;
    bo.pair = pair;
    bo.ts = o.ts;
    bo.stride = o.stride;
    bo.min_horizon = o.horizon;
    const auto points = movm::bifurcation_diagram(config, parse_list(o.kappa_list), bo);
    std::ostringstream csv;
    movm::io::write_bifurcation_csv(csv, points);
    const auto out = require_out(o);
    write_text(out, csv.str());
    write_manifest("bifurcation", config, {out}, start, out + ".manifest.json");
    for (const auto& p : points) {
        if (p.status == "ok" || p.status == "non_stationary") return 0;
    }
    throw movm::NumericError("bifurcation: every point failed");
}

int cmd_roc_contour(const Options& o) {
    const auto start = std::chrono::steady_clock::now();
    const auto config = movm::io::load_config(o.config_path);
    const auto [lo, hi] = parse_range(o.a_range);
    const double d_tilde = movm::equilibrium(config).d_tilde;
    const auto a_values = linspace(lo, hi, o.grid);
    double tau_max = 0.0;
    for (double a : a_values) tau_max = std::max(tau_max, movm::critical_delay(a, d_tilde));
    const auto points = movm::roc_grid(a_values, linspace(0.0, tau_max, o.grid), d_tilde);
    std::ostringstream csv;
    movm::io::write_roc_csv(csv, points);
    const auto out = require_out(o);
    write_text(out, csv.str());
    write_manifest("roc-contour", config, {out}, start, out + ".manifest.json");
    return 0;
}

void report_error(const char* kind, const std::exception& e, json extra = json::object()) {
    extra["error"] = kind;
    extra["message"] = e.what();
    std::cerr << extra.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modified optimal velocity model: stability, simulation and Hopf analysis"};
    app.require_subcommand(1);
    Options o;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", o.config_path, "JSON platoon configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", o.out, "output path (prefix for simulate)")->required();
    };

    auto* chart = app.add_subcommand("stability-chart", "tau_cr, tau_noc, sigma and 1/max(a, d_tilde) over a grid of a");
    add_config(chart);
    chart->add_option("--a-range", o.a_range, "lo,hi")->capture_default_str();
    chart->add_option("--grid", o.grid, "number of a values")->capture_default_str();

    auto* report = app.add_subcommand("report", "per-pair stability report as JSON");
    add_config(report);

    auto* sim = app.add_subcommand("simulate", "nonlinear simulation to CSV plus metadata");
    add_config(sim);
    sim->add_option("--horizon", o.horizon, "simulated time (s)")->capture_default_str();
    sim->add_option("--ts", o.ts, "Euler step (s)")->capture_default_str();
    sim->add_option("--stride", o.stride, "keep every n-th step")->capture_default_str();

    auto* hopf = app.add_subcommand("hopf", "Hopf normal form of one vehicle pair");
    add_config(hopf);
    hopf->add_option("--vehicle", o.vehicle, "1-based pair index")->required();
    hopf->add_flag("--at-boundary", o.at_boundary, "set the pair's delay to tau_cr first");

    auto* bif = app.add_subcommand("bifurcation", "limit-cycle amplitude against kappa");
    add_config(bif);
    bif->add_option("--vehicle", o.vehicle, "1-based pair index")->required();
    bif->add_option("--kappa-list", o.kappa_list, "comma-separated kappa values")->capture_default_str();
    bif->add_option("--horizon", o.horizon, "minimum simulated time per point (s)")->capture_default_str();
    bif->add_option("--ts", o.ts, "Euler step (s)")->capture_default_str();
    bif->add_option("--stride", o.stride, "keep every n-th step")->default_val(10);
    bif->add_flag("--at-boundary", o.at_boundary, "set the pair's delay to tau_cr first");

    auto* roc = app.add_subcommand("roc-contour", "rate of convergence over an (a, tau) grid");
    add_config(roc);
    roc->add_option("--a-range", o.a_range, "lo,hi")->capture_default_str();
    roc->add_option("--grid", o.grid, "points per axis")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*chart) return cmd_stability_chart(o);
        if (*report) return cmd_report(o);
        if (*sim) return cmd_simulate(o);
        if (*hopf) return cmd_hopf(o);
        if (*bif) return cmd_bifurcation(o);
        if (*roc) return cmd_roc_contour(o);
    } catch (const movm::ConfigError& e) {
        report_error("config", e);
        return kExitConfig;
    } catch (const movm::AssumptionViolation& e) {
        report_error("assumption", e);
        return kExitAssumption;
    } catch (const movm::GridPointError& e) {
        report_error("numeric", e, {{"a", e.a()}, {"tau", e.tau()}});
        return kExitNumeric;
    } catch (const movm::BlowUpError& e) {
        report_error("numeric", e, {{"time", e.time()}});
        return kExitNumeric;
    } catch (const movm::Error& e) {
        report_error("numeric", e);
        return kExitNumeric;
    }
    return 0;
}
