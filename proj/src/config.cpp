#include "levyshe/config.hpp"

#include "levyshe/errors.hpp"
#include "levyshe/io.hpp"

#include <fstream>

namespace levyshe {

using nlohmann::json;

namespace {

json make_defaults() {
    return json::parse(R"({
  "dimension": 1,
  "beta": 1.0,
  "truncation_a": 0.5,
  "horizon_t": 1.0,
  "box": {"policy": "auto", "half_width": 0.0},
  "seed": 1,
  "replicas": 1000,
  "atom_cap": 20000000,
  "moments": {"p": 1.0, "point_to_point": false, "x": [], "rho_scaled": true},
  "lyapunov": {"p": 2.0, "t_grid": [2.0, 4.0, 8.0]},
  "sizebias": {"g": "one_body_exp", "R": 1.0, "a_z": 0.5, "b_z": 2.0},
  "intermittency": {"t_list": [2.0, 4.0, 8.0]},
  "degeneracy": {"a_grid": [0.2, 0.1, 0.05], "x": [], "window": "bridge", "half_width": 4.0},
  "truncation": {"a_grid": [0.4, 0.2, 0.1, 0.05], "x": [], "p": 1.0},
  "mass_concentration": {"alpha": 0.1, "grid_half_width": 10.0, "grid_cells": 200},
  "box_convergence": {"l_grid": []}
})");
}

bool same_type(const json& value, const json& proto) {
    if (proto.is_number()) return value.is_number();
    if (proto.is_boolean()) return value.is_boolean();
    if (proto.is_string()) return value.is_string();
    if (proto.is_array()) return value.is_array();
    if (proto.is_object()) return value.is_object();
    return true;
}

// Overlay `user` onto `proto`, rejecting keys the schema does not know.
json overlay(const json& proto, const json& user, const std::string& where) {
    if (!user.is_object()) throw ConfigError(where + " must be a JSON object");
    json out = proto;
    for (const auto& [key, value] : user.items()) {
        const std::string path = where.empty() ? key : where + "." + key;
        if (!proto.contains(key)) throw ConfigError("unknown config key '" + path + "'");
        const auto& p = proto.at(key);
        if (!same_type(value, p)) throw ConfigError("config key '" + path + "' has the wrong type");
        out[key] = p.is_object() ? overlay(p, value, path) : value;
    }
    return out;
}

std::vector<double> numbers(const json& j, const std::string& what) {
    try {
        return j.get<std::vector<double>>();
    } catch (const json::exception&) {
        throw ConfigError(what + " must be an array of numbers");
    }
}

} // namespace

const json& RunConfig::defaults() {
    static const json d = make_defaults();
    return d;
}

RunConfig RunConfig::from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (!j.contains("measure")) throw ConfigError("config needs a 'measure' descriptor");
    json rest = j;
    rest.erase("measure");
    RunConfig c;
    c.resolved_ = overlay(defaults(), rest, "");
    c.measure_ = io::measure_from_json(j.at("measure"));
    c.resolved_["measure"] = io::measure_to_json(*c.measure_);

    if (c.dimension() < 1) throw ConfigError("dimension must be >= 1");
    if (!(c.beta() >= 0.0)) throw ConfigError("beta must be >= 0");
    if (!(c.truncation_a() > 0.0)) throw ConfigError("truncation_a must be > 0");
    if (!(c.horizon() > 0.0)) throw ConfigError("horizon_t must be > 0");
    if (c.replicas() < 1) throw ConfigError("replicas must be >= 1");
    (void)window_policy_from_string(c.resolved_["box"]["policy"].get<std::string>());
    (void)window_policy_from_string(c.resolved_["degeneracy"]["window"].get<std::string>());
    (void)functional_from_string(c.resolved_["sizebias"]["g"].get<std::string>());
    return c;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("cannot parse config '" + path.string() + "': " + e.what());
    }
    return from_json(j);
}

int RunConfig::dimension() const { return resolved_.at("dimension").get<int>(); }
double RunConfig::beta() const { return resolved_.at("beta").get<double>(); }
double RunConfig::truncation_a() const { return resolved_.at("truncation_a").get<double>(); }
double RunConfig::horizon() const { return resolved_.at("horizon_t").get<double>(); }
std::uint64_t RunConfig::seed() const { return resolved_.at("seed").get<std::uint64_t>(); }
std::size_t RunConfig::replicas() const { return resolved_.at("replicas").get<std::size_t>(); }

void RunConfig::override_seed(std::uint64_t seed) { resolved_["seed"] = seed; }

MomentConfig RunConfig::moment_config() const {
    MomentConfig m;
    m.d = dimension();
    m.beta = beta();
    m.a = truncation_a();
    m.t = horizon();
    m.n = replicas();
    m.seed = seed();
    const auto& mo = resolved_.at("moments");
    m.p = mo.at("p").get<double>();
    m.point_to_point = mo.at("point_to_point").get<bool>();
    m.x = numbers(mo.at("x"), "moments.x");
    m.rho_scaled = mo.at("rho_scaled").get<bool>();
    m.window = window_policy_from_string(resolved_.at("box").at("policy").get<std::string>());
    m.half_width = resolved_.at("box").at("half_width").get<double>();
    m.atom_cap = resolved_.at("atom_cap").get<std::size_t>();
    return m;
}

std::vector<double> RunConfig::lyapunov_t_grid() const {
    return numbers(resolved_.at("lyapunov").at("t_grid"), "lyapunov.t_grid");
}

SizeBiasConfig RunConfig::sizebias_config() const {
    SizeBiasConfig s;
    s.d = dimension();
    s.beta = beta();
    s.a = truncation_a();
    s.t = horizon();
    s.n = replicas();
    s.seed = seed();
    if (resolved_.at("box").at("policy") == "explicit") s.half_width = resolved_.at("box").at("half_width").get<double>();
    const auto& sb = resolved_.at("sizebias");
    s.g = functional_from_string(sb.at("g").get<std::string>());
    s.box.radius = sb.at("R").get<double>();
    s.box.a_z = sb.at("a_z").get<double>();
    s.box.b_z = sb.at("b_z").get<double>();
    s.box.horizon = s.t;
    return s;
}

MassConcentrationConfig RunConfig::mass_concentration_config() const {
    MassConcentrationConfig m;
    m.d = dimension();
    m.beta = beta();
    m.a = truncation_a();
    m.t = horizon();
    m.n_env = replicas();
    m.seed = seed();
    const auto& b = resolved_.at("mass_concentration");
    m.alpha = b.at("alpha").get<double>();
    m.grid_half_width = b.at("grid_half_width").get<double>();
    m.grid_cells = b.at("grid_cells").get<std::size_t>();
    return m;
}

IntermittencyConfig RunConfig::intermittency_config() const {
    IntermittencyConfig c;
    c.d = dimension();
    c.beta = beta();
    c.a = truncation_a();
    c.n = replicas();
    c.seed = seed();
    c.t_list = numbers(resolved_.at("intermittency").at("t_list"), "intermittency.t_list");
    return c;
}

DegeneracyConfig RunConfig::degeneracy_config() const {
    DegeneracyConfig c;
    c.d = dimension();
    c.beta = beta();
    c.t = horizon();
    c.n = replicas();
    c.seed = seed();
    const auto& b = resolved_.at("degeneracy");
    c.a_grid = numbers(b.at("a_grid"), "degeneracy.a_grid");
    c.x = numbers(b.at("x"), "degeneracy.x");
    c.window = window_policy_from_string(b.at("window").get<std::string>());
    c.half_width = b.at("half_width").get<double>();
    c.atom_cap = resolved_.at("atom_cap").get<std::size_t>();
    return c;
}

TruncationConfig RunConfig::truncation_config() const {
    TruncationConfig c;
    c.d = dimension();
    c.beta = beta();
    c.t = horizon();
    c.n = replicas();
    c.seed = seed();
    const auto& b = resolved_.at("truncation");
    c.a_grid = numbers(b.at("a_grid"), "truncation.a_grid");
    c.x = numbers(b.at("x"), "truncation.x");
    c.p = b.at("p").get<double>();
    c.window = window_policy_from_string(resolved_.at("box").at("policy").get<std::string>());
    c.half_width = resolved_.at("box").at("half_width").get<double>();
    c.atom_cap = resolved_.at("atom_cap").get<std::size_t>();
    return c;
}

BoxConfig RunConfig::box_config() const {
    BoxConfig c;
    c.d = dimension();
    c.beta = beta();
    c.a = truncation_a();
    c.t = horizon();
    c.n = replicas();
    c.seed = seed();
    c.l_grid = numbers(resolved_.at("box_convergence").at("l_grid"), "box_convergence.l_grid");
    return c;
}

} // namespace levyshe
