#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path kWork = fs::path(MOVM_TEST_WORKDIR) / "cli";
const std::string kConfigs = MOVM_CONFIG_DIR;

int run(const std::string& args) {
    fs::create_directories(kWork);
    const std::string cmd = std::string(MOVM_BINARY) + " " + args + " 2> " + (kWork / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> csv(const fs::path& p) {
    std::vector<std::vector<std::string>> rows;
    std::stringstream ss(slurp(p));
    std::string line;
    while (std::getline(ss, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.emplace_back();
        rows.push_back(cells);
    }
    return rows;
}

std::string out(const std::string& name) { return (kWork / name).string(); }

std::string write_config(const std::string& name, const json& j) {
    fs::create_directories(kWork);
    std::ofstream(kWork / name) << j.dump(2);
    return out(name);
}

json chart_config() { return json::parse(slurp(kConfigs + "/chart_bando.json")); }

}  // namespace

TEST_CASE("stability chart") {
    const std::string cfg = kConfigs + "/chart_bando.json";
    REQUIRE(run("stability-chart --config " + cfg + " --grid 9 --out " + out("chart.csv")) == 0);
    const auto rows = csv(kWork / "chart.csv");
    REQUIRE(rows.size() == 10);
    CHECK(rows[0] == std::vector<std::string>{"a", "d_tilde", "tau_cr", "tau_noc", "sigma", "sc_bound"});
    for (std::size_t i = 1; i < rows.size(); ++i) {
        REQUIRE(rows[i].size() == 6);
        CHECK(std::stod(rows[i][3]) < std::stod(rows[i][2]));
        CHECK(std::stod(rows[i][5]) == doctest::Approx(1.0 / std::max(std::stod(rows[i][0]), std::stod(rows[i][1]))));
    }
    CHECK(std::stod(rows[1][0]) == 1.0);
    CHECK(std::stod(rows[9][0]) == 5.0);

    // Deterministic bytes.
    const std::string first = slurp(kWork / "chart.csv");
    REQUIRE(run("stability-chart --config " + cfg + " --grid 9 --out " + out("chart.csv")) == 0);
    CHECK(slurp(kWork / "chart.csv") == first);

    REQUIRE(run("stability-chart --config " + cfg + " --grid 1 --out " + out("chart1.csv")) == 0);
    CHECK(csv(kWork / "chart1.csv").size() == 2);

    const auto manifest = json::parse(slurp(kWork / "chart.csv.manifest.json"));
    CHECK(manifest.at("command") == "stability-chart");
    CHECK(manifest.at("outputs").size() == 1);
    CHECK(manifest.contains("version"));
    CHECK(manifest.contains("wall_seconds"));
    CHECK(manifest.at("config").at("a") == 1.2);
}

TEST_CASE("config errors exit with 2") {
    CHECK(run("stability-chart --config /nonexistent.json --out " + out("x.csv")) == 2);
    auto j = chart_config();
    j["mystery"] = 1;
    CHECK(run("report --config " + write_config("unknown.json", j) + " --out " + out("x.json")) == 2);
    fs::create_directories(kWork);
    std::ofstream(kWork / "broken.json") << "{ not json";
    CHECK(run("report --config " + out("broken.json") + " --out " + out("x.json")) == 2);
    CHECK(run("stability-chart --config " + kConfigs + "/chart_bando.json --a-range 5,1 --out " + out("x.csv")) == 2);
    CHECK(run("hopf --config " + kConfigs + "/onset.json --vehicle 7 --out " + out("x.json")) == 2);
    CHECK(run("report --config " + kConfigs + "/onset.json") == 2);
    CHECK(run("frobnicate") == 2);
    const auto err = json::parse(slurp(kWork / "stderr.txt"), nullptr, false);
    (void)err;  // CLI11 usage text, not JSON
}

TEST_CASE("numeric failure exits with 3 and reports JSON") {
    auto j = chart_config();
    j["tau"] = {0.0};
    CHECK(run("hopf --config " + write_config("zero_delay.json", j) + " --vehicle 1 --out " + out("x.json")) == 3);
    const auto err = json::parse(slurp(kWork / "stderr.txt"));
    CHECK(err.at("error") == "numeric");
    CHECK(err.contains("message"));
}

TEST_CASE("assumption violation exits with 4") {
    auto j = json::parse(slurp(kConfigs + "/onset.json"));
    j["tau"] = {0.2, 0.2};
    CHECK(run("hopf --config " + write_config("twin.json", j) + " --vehicle 2 --out " + out("x.json")) == 4);
    CHECK(json::parse(slurp(kWork / "stderr.txt")).at("error") == "assumption");
}

TEST_CASE("hopf at the boundary") {
    REQUIRE(run("hopf --config " + kConfigs + "/onset_stable.json --vehicle 3 --at-boundary --out " +
                out("hopf.json")) == 0);
    const auto j = json::parse(slurp(kWork / "hopf.json"));
    CHECK(std::abs(j.at("kappa_cr").get<double>() - 1.0) < 1e-9);
    CHECK(j.at("vehicle") == 3);
    CHECK(j.at("mu2").get<double>() > 0.0);
    CHECK(fs::exists(kWork / "hopf.json.manifest.json"));
}

TEST_CASE("simulate writes trajectory, metadata and manifest") {
    auto j = json::parse(slurp(kConfigs + "/onset_stable.json"));
    j["leader"] = {{"type", "constant"}, {"v", 5.0}};
    const auto cfg = write_config("flat.json", j);
    REQUIRE(run("simulate --config " + cfg + " --horizon 2 --ts 0.001 --stride 10 --out " + out("flat")) == 0);
    const auto rows = csv(kWork / "flat.csv");
    REQUIRE(rows.size() == 202);
    CHECK(rows[0].front() == "t");
    CHECK(rows[0].back() == "leader_v");
    CHECK(rows[0].size() == 10);
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(std::abs(std::stod(rows[k][1])) < 1e-9);
    const auto meta = json::parse(slurp(kWork / "flat.json"));
    CHECK(meta.at("history_policy") == "constant");
    CHECK(json::parse(slurp(kWork / "flat.manifest.json")).at("outputs").size() == 2);
}

TEST_CASE("rate-of-convergence grid") {
    REQUIRE(run("roc-contour --config " + kConfigs + "/chart_bando.json --grid 6 --out " + out("roc.csv")) == 0);
    const auto rows = csv(kWork / "roc.csv");
    REQUIRE(rows.size() == 37);
    CHECK(rows[0] == std::vector<std::string>{"a", "tau", "sigma"});
    // Each a-slice starts at the delay-free rate a / 2 (complex roots here), and
    // falls monotonically to zero once past its peak.
    for (std::size_t s = 0; s < 6; ++s) {
        const auto row = [&](std::size_t k) { return rows[1 + 6 * s + k]; };
        CHECK(std::stod(row(0)[2]) == doctest::Approx(std::stod(row(0)[0]) / 2.0));
        std::size_t peak = 0;
        for (std::size_t k = 1; k < 6; ++k)
            if (std::stod(row(k)[2]) > std::stod(row(peak)[2])) peak = k;
        for (std::size_t k = peak + 1; k < 6; ++k) {
            CHECK(std::stod(row(k)[2]) < std::stod(row(k - 1)[2]) + 1e-12);
            CHECK(std::stod(row(k)[2]) >= 0.0);
        }
    }
    CHECK(std::stod(rows[6][2]) == 0.0);
}

TEST_CASE("bifurcation sweep") {
    REQUIRE(run("bifurcation --config " + kConfigs + "/bifurcation_bando_y2.json --vehicle 3 --kappa-list 1.04,1.08"
                " --ts 0.001 --out " + out("bif.csv")) == 0);
    const auto rows = csv(kWork / "bif.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"kappa", "amplitude", "horizon", "collision", "status"});
    CHECK(std::stod(rows[2][1]) > std::stod(rows[1][1]));
}
