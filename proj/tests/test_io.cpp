#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sstream>

#include "movm/errors.hpp"
#include "movm/io.hpp"
#include "movm/scenarios.hpp"

using namespace movm;
using movm::io::json;

namespace {

json base_config() {
    return json::parse(R"({
        "a": 1.2, "tau": [0.1, 0.2], "x0_dot_eq": 5.0, "y_star": 3.0,
        "ovf": {"family": "bando", "ym": 1.0, "y_tilde": 5.0},
        "leader": {"type": "smooth_exponential", "v_inf": 5.0, "rate": 10.0}
    })");
}

}  // namespace

TEST_CASE("number format") {
    CHECK(io::format_number(0.1) == "0.1");
    CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
    CHECK(io::format_number(-2.5e-9) == "-2.5e-09");
}

TEST_CASE("config round trip") {
    const auto c = io::config_from_json(base_config());
    CHECK(ovf_value(c.ovf, 3.0) == doctest::Approx(5.0).epsilon(1e-12));
    const auto back = io::config_from_json(io::to_json(c));
    CHECK(back.a == c.a);
    CHECK(back.tau == c.tau);
    CHECK(back.ovf.v0 == c.ovf.v0);
    CHECK(back.ovf.ym == c.ovf.ym);
    CHECK(back.x0_dot_eq == c.x0_dot_eq);
    CHECK(back.leader.velocity(0.3) == c.leader.velocity(0.3));
    CHECK(io::to_json(back) == io::to_json(c));

    for (const auto& s : {scenarios::onset_platoon(), scenarios::bifurcation_underwood(2.0).config}) {
        const auto r = io::config_from_json(io::to_json(s));
        CHECK(io::to_json(r) == io::to_json(s));
    }
}

TEST_CASE("leader variants") {
    auto j = base_config();
    j["leader"] = json::parse(R"({"type": "constant", "v": 5.0})");
    CHECK(io::config_from_json(j).leader.velocity(7.0) == 5.0);
    j["leader"] = json::parse(R"({"type": "piecewise_linear", "knots": [[0, 4], [2, 5]]})");
    CHECK(io::config_from_json(j).leader.velocity(1.0) == doctest::Approx(4.5));
    j.erase("leader");
    CHECK(io::config_from_json(j).leader.velocity(0.0) == 5.0);
    j["leader"] = json::parse(R"({"type": "warp"})");
    CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
}

TEST_CASE("malformed configs are config errors") {
    auto j = base_config();
    j["colour"] = "red";
    CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
    j = base_config();
    j["ovf"]["speed"] = 1;
    CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
    j = base_config();
    j.erase("tau");
    CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
    j = base_config();
    j["a"] = "fast";
    CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
    j = base_config();
    j.erase("y_star");
    CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
    j = base_config();
    j["tau"] = json::array();
    CHECK_THROWS_AS(io::config_from_json(j), ConfigError);
    j = base_config();
    j["ovf"]["n"] = nullptr;  // null optional fields are accepted
    CHECK_NOTHROW(io::config_from_json(j));
    CHECK_THROWS_AS(io::load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("trajectory CSV") {
    Trajectory tr;
    tr.t = {0.0, 0.5};
    tr.v = {{0.1, 0.2}, {0.3, 0.4}};
    tr.y = {{3.0, 3.1}, {2.9, 2.8}};
    tr.leader_v = {5.0, 5.0};
    std::ostringstream out;
    io::write_trajectory_csv(out, tr);
    CHECK(out.str() == "t,v_1,v_2,y_1,y_2,leader_v\n0,0.1,0.3,3,2.9,5\n0.5,0.2,0.4,3.1,2.8,5\n");
}

TEST_CASE("chart and bifurcation CSV") {
    std::ostringstream chart;
    ChartRow row{1.0, 2.0, 0.3, std::nullopt, 0.5, 0.5};
    io::write_chart_csv(chart, {row});
    CHECK(chart.str() == "a,d_tilde,tau_cr,tau_noc,sigma,sc_bound\n1,2,0.3,,0.5,0.5\n");
    std::ostringstream bif;
    io::write_bifurcation_csv(bif, {{1.02, 0.25, 200.0, "ok", false}});
    CHECK(bif.str().rfind("kappa,amplitude,horizon,collision,status\n", 0) == 0);
}

TEST_CASE("normal form JSON") {
    const auto s = scenarios::bifurcation_bando(2.0);
    const auto j = io::to_json(normal_form(s.config, s.pair));
    CHECK(j.at("vehicle") == 3);
    for (const char* k : {"kappa_cr", "omega0", "q0", "p0", "g20", "g11", "g02", "g21", "w20", "w11", "e", "f",
                          "c1_0", "alpha_prime_0", "mu2", "beta2", "classification", "diagnostics"}) {
        CAPTURE(k);
        CHECK(j.contains(k));
    }
    CHECK(j.at("c1_0").contains("re"));
}
