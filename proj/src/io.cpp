#include "movm/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <set>

#include "movm/errors.hpp"

namespace movm::io {

namespace {

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected a JSON object");
    for (const auto& item : j.items()) {
        if (!allowed.count(item.key())) throw ConfigError(where + ": unknown field '" + item.key() + "'");
    }
}

template <class T>
std::optional<T> optional_field(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

template <class T>
T required_field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key) || j.at(key).is_null()) throw ConfigError(where + ": missing field '" + key + "'");
    return j.at(key).get<T>();
}

json nullable(const std::optional<double>& x) { return x ? json(*x) : json(nullptr); }

}  // namespace

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

json to_json(const OvfSpec& spec) {
    return {{"family", std::string(to_string(spec.family))},
            {"v0", spec.v0},
            {"ym", nullable(spec.ym)},
            {"y_tilde", nullable(spec.y_tilde)},
            {"y0", nullable(spec.y0)},
            {"n", spec.n ? json(*spec.n) : json(nullptr)}};
}

OvfSpec ovf_from_json(const json& j) {
    try {
        reject_unknown(j, {"family", "v0", "ym", "y_tilde", "y0", "n"}, "ovf");
        OvfSpec s;
        s.family = ovf_family_from_string(required_field<std::string>(j, "family", "ovf"));
        s.v0 = optional_field<double>(j, "v0").value_or(1.0);
        s.ym = optional_field<double>(j, "ym");
        s.y_tilde = optional_field<double>(j, "y_tilde");
        s.y0 = optional_field<double>(j, "y0");
        s.n = optional_field<int>(j, "n");
        return s;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("ovf: ") + e.what());
    }
}

json to_json(const LeaderProfile& leader) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, SmoothExponential>) {
                return {{"type", "smooth_exponential"}, {"v_inf", p.v_inf}, {"rate", p.rate}};
            } else if constexpr (std::is_same_v<T, ConstantVelocity>) {
                return {{"type", "constant"}, {"v", p.v}};
            } else {
                json knots = json::array();
                for (const auto& [t, v] : p.knots) knots.push_back({t, v});
                return {{"type", "piecewise_linear"}, {"knots", knots}};
            }
        },
        leader.variant());
}

LeaderProfile leader_from_json(const json& j) {
    try {
        const auto type = required_field<std::string>(j, "type", "leader");
        if (type == "smooth_exponential") {
            reject_unknown(j, {"type", "v_inf", "rate"}, "leader");
            return LeaderProfile(SmoothExponential{required_field<double>(j, "v_inf", "leader"),
                                                   required_field<double>(j, "rate", "leader")});
        }
        if (type == "constant") {
            reject_unknown(j, {"type", "v"}, "leader");
            return LeaderProfile(ConstantVelocity{required_field<double>(j, "v", "leader")});
        }
        if (type == "piecewise_linear") {
            reject_unknown(j, {"type", "knots"}, "leader");
            PiecewiseLinear p;
            for (const auto& k : j.at("knots")) {
                if (!k.is_array() || k.size() != 2) throw ConfigError("leader: knots are [t, v] pairs");
                p.knots.emplace_back(k[0].get<double>(), k[1].get<double>());
            }
            return LeaderProfile(std::move(p));
        }
        throw ConfigError("leader: unknown type '" + type + "'");
    } catch (const json::exception& e) {
        throw ConfigError(std::string("leader: ") + e.what());
    }
}

json to_json(const PlatoonConfig& config) {
    return {{"a", config.a},
            {"tau", config.tau},
            {"ovf", to_json(config.ovf)},
            {"leader", to_json(config.leader)},
            {"kappa", config.kappa},
            {"x0_dot_eq", config.x0_dot_eq}};
}

PlatoonConfig config_from_json(const json& j) {
    try {
        reject_unknown(j, {"a", "tau", "ovf", "leader", "kappa", "x0_dot_eq", "y_star"}, "config");
        PlatoonConfig c;
        c.a = required_field<double>(j, "a", "config");
        c.tau = required_field<std::vector<double>>(j, "tau", "config");
        c.ovf = ovf_from_json(required_field<json>(j, "ovf", "config"));
        c.kappa = optional_field<double>(j, "kappa").value_or(1.0);
        c.x0_dot_eq = optional_field<double>(j, "x0_dot_eq").value_or(5.0);
        if (j.contains("leader") && !j.at("leader").is_null()) {
            c.leader = leader_from_json(j.at("leader"));
        } else {
            c.leader = LeaderProfile(ConstantVelocity{c.x0_dot_eq});
        }
        if (const auto y_star = optional_field<double>(j, "y_star")) {
            c.ovf = with_equilibrium(c.ovf, *y_star, c.x0_dot_eq);
        } else if (!j.at("ovf").contains("v0") || j.at("ovf").at("v0").is_null()) {
            throw ConfigError("config: give either ovf.v0 or y_star");
        }
        c.validate();
        return c;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const DomainError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    } catch (const RangeError& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
}

PlatoonConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError("config '" + path + "': " + e.what());
    }
    return config_from_json(j);
}

json to_json(cplx z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const Eigen::VectorXcd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
    return out;
}

namespace {

json theta_json(const ThetaVector& w) {
    return {{"omega", w.omega},
            {"exp_plus", to_json(w.c_plus)},
            {"exp_minus", to_json(w.c_minus)},
            {"exp_double", to_json(w.c_double)},
            {"constant", to_json(w.c_const)}};
}

}  // namespace

json to_json(const NormalFormResult& r) {
    const auto& d = r.diagnostics;
    json taylor = {{"omega1", r.taylor.omega1}, {"omega2", r.taylor.omega2}, {"omega3", r.taylor.omega3},
                   {"zeta1", r.taylor.zeta1},   {"zeta2", r.taylor.zeta2},   {"zeta3", r.taylor.zeta3}};
    json p0 = json::array();
    for (Eigen::Index i = 0; i < r.adjoint.p0.size(); ++i) p0.push_back(to_json(r.adjoint.p0(i)));
    return {
        {"vehicle", r.pair + 1},
        {"kappa_cr", r.kappa_cr},
        {"omega0", r.omega0},
        {"taylor", taylor},
        {"q0", to_json(r.eigvec.q0)},
        {"p0", p0},
        {"g20", to_json(r.g.g20)},
        {"g02", to_json(r.g.g02)},
        {"g11", to_json(r.g.g11)},
        {"g21", to_json(r.g.g21)},
        {"w20", theta_json(r.w.w20)},
        {"w11", theta_json(r.w.w11)},
        {"e", to_json(r.w.e)},
        {"f", to_json(r.w.f)},
        {"c1_0", to_json(r.c1)},
        {"alpha_prime_0", r.alpha_prime},
        {"mu2", r.mu2},
        {"beta2", r.beta2},
        {"amplitude_coefficient", r.amplitude_coefficient},
        {"classification",
         {{"classified", r.classified},
          {"supercritical", r.supercritical},
          {"orbitally_stable", r.orbitally_stable}}},
        {"diagnostics",
         {{"q_residual", d.q_residual},
          {"p_residual", d.p_residual},
          {"inner_product_pq", to_json(d.pq)},
          {"inner_product_pq_bar", to_json(d.pq_bar)},
          {"block_moduli", d.block_moduli},
          {"singular_gap", d.singular_gap},
          {"min_modulus_at_zero", d.modulus_at_zero},
          {"min_modulus_at_double", d.modulus_at_double},
          {"dlambda_dkappa_matrix", to_json(d.dlambda_dkappa_matrix)}}},
    };
}

json to_json(const StabilityReport& report) {
    json pairs = json::array();
    for (std::size_t i = 0; i < report.pairs.size(); ++i) {
        const auto& p = report.pairs[i];
        pairs.push_back({{"vehicle", i + 1},
                         {"tau", p.tau},
                         {"tau_cr", p.tau_cr},
                         {"tau_noc", nullable(p.tau_noc)},
                         {"sigma", p.sigma},
                         {"small_delay_sufficient", p.small_delay_sufficient},
                         {"locally_stable", p.locally_stable},
                         {"non_oscillatory", p.non_oscillatory}});
    }
    return {{"a", report.a},
            {"d_tilde", report.d_tilde},
            {"kappa", report.kappa},
            {"m_minus", report.m_minus},
            {"m_plus", report.m_plus},
            {"platoon_sigma", report.platoon_sigma},
            {"pairs", pairs}};
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
    const std::size_t n = trajectory.pairs();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",v_" << i;
    for (std::size_t i = 1; i <= n; ++i) out << ",y_" << i;
    out << ",leader_v\n";
    for (std::size_t k = 0; k < trajectory.samples(); ++k) {
        out << format_number(trajectory.t[k]);
        for (std::size_t i = 0; i < n; ++i) out << ',' << format_number(trajectory.v[i][k]);
        for (std::size_t i = 0; i < n; ++i) out << ',' << format_number(trajectory.y[i][k]);
        out << ',' << format_number(trajectory.leader_v[k]) << '\n';
    }
}

json trajectory_metadata(const PlatoonConfig& config, const Trajectory& trajectory) {
    return {{"config", to_json(config)},
            {"ts", trajectory.ts},
            {"horizon", trajectory.horizon},
            {"stride", trajectory.stride},
            {"samples", trajectory.samples()},
            {"delay_steps", trajectory.delay_steps},
            {"delay_realised", trajectory.delay_realised},
            {"history_policy", trajectory.history_policy},
            {"integrator", "explicit_euler"},
            {"collision", trajectory.collision},
            {"first_collision_time",
             trajectory.collision ? json(trajectory.first_collision_time) : json(nullptr)}};
}

void write_chart_csv(std::ostream& out, const std::vector<ChartRow>& rows) {
    out << "a,d_tilde,tau_cr,tau_noc,sigma,sc_bound\n";
    for (const auto& r : rows) {
        out << format_number(r.a) << ',' << format_number(r.d_tilde) << ',' << format_number(r.tau_cr) << ','
            << (r.tau_noc ? format_number(*r.tau_noc) : std::string()) << ',' << format_number(r.sigma) << ','
            << format_number(r.sc_bound) << '\n';
    }
}

void write_roc_csv(std::ostream& out, const std::vector<RocPoint>& points) {
    out << "a,tau,sigma\n";
    for (const auto& p : points)
        out << format_number(p.a) << ',' << format_number(p.tau) << ',' << format_number(p.sigma) << '\n';
}

void write_bifurcation_csv(std::ostream& out, const std::vector<BifurcationPoint>& points) {
    out << "kappa,amplitude,horizon,collision,status\n";
    for (const auto& p : points) {
        std::string status = p.status;
        for (char& c : status) {
            if (c == ',' || c == '\n') c = ';';
        }
        out << format_number(p.kappa) << ',' << format_number(p.amplitude) << ',' << format_number(p.horizon)
            << ',' << (p.collision ? 1 : 0) << ',' << status << '\n';
    }
}

json to_json(const RunManifest& m) {
    return {{"command", m.command},
            {"tool", "movm"},
            {"version", kToolVersion},
            {"config", m.config},
            {"outputs", m.outputs},
            {"wall_seconds", m.wall_seconds}};
}

}  // namespace movm::io
