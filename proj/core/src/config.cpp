#include "bodyflow/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace bodyflow {

using nlohmann::json;

namespace {

void check_keys(const json& j, const std::string& path, const std::set<std::string>& known) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (const auto& item : j.items()) {
        if (!known.count(item.key())) {
            throw ConfigError(path + "." + item.key() + ": unknown key");
        }
    }
}

double get_num(const json& j, const std::string& path, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) throw ConfigError(path + "." + key + ": expected a number");
    return j[key].get<double>();
}

int get_int(const json& j, const std::string& path, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) throw ConfigError(path + "." + key + ": expected an integer");
    return j[key].get<int>();
}

std::string get_str(const json& j, const std::string& path, const char* key,
                    const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) throw ConfigError(path + "." + key + ": expected a string");
    return j[key].get<std::string>();
}

Vec2 get_vec2(const json& j, const std::string& path, const char* key, const Vec2& fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j[key];
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        throw ConfigError(path + "." + key + ": expected [x, y]");
    }
    return Vec2(v[0].get<double>(), v[1].get<double>());
}

std::vector<double> get_num_list(const json& j, const std::string& path, const char* key,
                                 const std::vector<double>& fallback) {
    if (!j.contains(key)) return fallback;
    const json& v = j[key];
    if (!v.is_array()) throw ConfigError(path + "." + key + ": expected a list of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(path + "." + key + ": expected a list of numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

void require_positive(double v, const std::string& field) {
    if (!(v > 0.0)) throw ConfigError(field + ": must be positive");
}
void require_nonnegative(double v, const std::string& field) {
    if (v < 0.0) throw ConfigError(field + ": must be nonnegative");
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    ScenarioConfig c;
    check_keys(j, "config",
               {"scenario", "initial", "numerics", "ns", "uniqueness", "output", "seed"});

    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer()) {
            throw ConfigError("config.seed: expected an integer");
        }
        c.seed = j["seed"].get<unsigned long long>();
    }

    if (j.contains("scenario")) {
        const json& s = j["scenario"];
        check_keys(s, "scenario",
                   {"preset", "domain_radius", "ellipse_a", "ellipse_b", "solid_radius",
                    "solid_density", "geometry_file"});
        c.scenario.preset = get_str(s, "scenario", "preset", c.scenario.preset);
        const std::set<std::string> presets{"disk-in-disk", "disk-in-ellipse", "two-hole",
                                            "custom"};
        if (!presets.count(c.scenario.preset)) {
            throw ConfigError("scenario.preset: unknown preset '" + c.scenario.preset + "'");
        }
        c.scenario.domain_radius = get_num(s, "scenario", "domain_radius", c.scenario.domain_radius);
        c.scenario.ellipse_a = get_num(s, "scenario", "ellipse_a", c.scenario.ellipse_a);
        c.scenario.ellipse_b = get_num(s, "scenario", "ellipse_b", c.scenario.ellipse_b);
        c.scenario.solid_radius = get_num(s, "scenario", "solid_radius", c.scenario.solid_radius);
        c.scenario.solid_density =
            get_num(s, "scenario", "solid_density", c.scenario.solid_density);
        c.scenario.geometry_file = get_str(s, "scenario", "geometry_file", "");
        require_positive(c.scenario.domain_radius, "scenario.domain_radius");
        require_positive(c.scenario.ellipse_a, "scenario.ellipse_a");
        require_positive(c.scenario.ellipse_b, "scenario.ellipse_b");
        require_positive(c.scenario.solid_radius, "scenario.solid_radius");
        require_positive(c.scenario.solid_density, "scenario.solid_density");
        if (c.scenario.preset == "custom" && c.scenario.geometry_file.empty()) {
            throw ConfigError("scenario.geometry_file: required for the custom preset");
        }
    }

    if (j.contains("initial")) {
        const json& s = j["initial"];
        check_keys(s, "initial",
                   {"h0", "theta0", "l0", "r0", "vorticity", "gamma_body", "gamma_holes"});
        c.initial.h0 = get_vec2(s, "initial", "h0", c.initial.h0);
        c.initial.theta0 = get_num(s, "initial", "theta0", c.initial.theta0);
        c.initial.l0 = get_vec2(s, "initial", "l0", c.initial.l0);
        c.initial.r0 = get_num(s, "initial", "r0", c.initial.r0);
        c.initial.gamma_body = get_num(s, "initial", "gamma_body", c.initial.gamma_body);
        c.initial.gamma_holes = get_num_list(s, "initial", "gamma_holes", c.initial.gamma_holes);
        if (s.contains("vorticity")) {
            const json& v = s["vorticity"];
            check_keys(v, "initial.vorticity",
                       {"preset", "amplitude", "center", "radius", "separation", "count"});
            auto& w = c.initial.vorticity;
            w.preset = get_str(v, "initial.vorticity", "preset", w.preset);
            const std::set<std::string> wp{"none", "single-blob", "pair", "random-seeded"};
            if (!wp.count(w.preset)) {
                throw ConfigError("initial.vorticity.preset: unknown preset '" + w.preset + "'");
            }
            w.amplitude = get_num(v, "initial.vorticity", "amplitude", w.amplitude);
            w.center = get_vec2(v, "initial.vorticity", "center", w.center);
            w.radius = get_num(v, "initial.vorticity", "radius", w.radius);
            w.separation = get_num(v, "initial.vorticity", "separation", w.separation);
            w.count = get_int(v, "initial.vorticity", "count", w.count);
            require_positive(w.radius, "initial.vorticity.radius");
            require_positive(w.separation, "initial.vorticity.separation");
            if (w.count < 1) throw ConfigError("initial.vorticity.count: must be at least 1");
        }
    }

    if (j.contains("numerics")) {
        const json& s = j["numerics"];
        check_keys(s, "numerics",
                   {"panels", "particles", "dt", "cfl", "quad_resolution", "eps_blob", "d_min",
                    "t_end", "flow_substeps"});
        auto& n = c.numerics;
        n.panels = get_int(s, "numerics", "panels", n.panels);
        n.particles = get_int(s, "numerics", "particles", n.particles);
        n.dt = get_num(s, "numerics", "dt", n.dt);
        n.cfl = get_num(s, "numerics", "cfl", n.cfl);
        n.quad_resolution = get_int(s, "numerics", "quad_resolution", n.quad_resolution);
        n.eps_blob = get_num(s, "numerics", "eps_blob", n.eps_blob);
        n.d_min = get_num(s, "numerics", "d_min", n.d_min);
        n.t_end = get_num(s, "numerics", "t_end", n.t_end);
        n.flow_substeps = get_int(s, "numerics", "flow_substeps", n.flow_substeps);
        if (n.panels < 32) throw ConfigError("numerics.panels: must be at least 32");
        if (n.particles < 1) throw ConfigError("numerics.particles: must be at least 1");
        if (n.dt < 0.0) throw ConfigError("numerics.dt: must be nonnegative (0 = automatic)");
        require_positive(n.cfl, "numerics.cfl");
        if (n.quad_resolution < 16) throw ConfigError("numerics.quad_resolution: too small");
        require_nonnegative(n.eps_blob, "numerics.eps_blob");
        require_nonnegative(n.d_min, "numerics.d_min");
        require_positive(n.t_end, "numerics.t_end");
        if (n.flow_substeps < 4) throw ConfigError("numerics.flow_substeps: too small");
    }

    if (j.contains("ns")) {
        const json& s = j["ns"];
        check_keys(s, "ns", {"grid", "eta", "gravity"});
        c.ns.grid = get_int(s, "ns", "grid", c.ns.grid);
        c.ns.eta = get_num(s, "ns", "eta", c.ns.eta);
        c.ns.gravity = get_num(s, "ns", "gravity", c.ns.gravity);
        if (c.ns.grid < 16) throw ConfigError("ns.grid: must be at least 16");
        require_positive(c.ns.eta, "ns.eta");
    }

    if (j.contains("uniqueness")) {
        const json& s = j["uniqueness"];
        check_keys(s, "uniqueness", {"mode", "channel", "epsilons", "times"});
        auto& u = c.uniqueness;
        u.mode = get_str(s, "uniqueness", "mode", u.mode);
        if (u.mode != "euler" && u.mode != "ns") {
            throw ConfigError("uniqueness.mode: must be 'euler' or 'ns'");
        }
        u.channel = get_str(s, "uniqueness", "channel", u.channel);
        if (u.channel != "l0" && u.channel != "r0" && u.channel != "vorticity") {
            throw ConfigError("uniqueness.channel: must be 'l0', 'r0' or 'vorticity'");
        }
        u.epsilons = get_num_list(s, "uniqueness", "epsilons", u.epsilons);
        u.times = get_num_list(s, "uniqueness", "times", u.times);
        for (double e : u.epsilons) require_positive(e, "uniqueness.epsilons");
        for (double t : u.times) require_positive(t, "uniqueness.times");
        if (u.epsilons.empty()) throw ConfigError("uniqueness.epsilons: must not be empty");
        if (u.times.empty()) throw ConfigError("uniqueness.times: must not be empty");
    }

    if (j.contains("output")) {
        const json& s = j["output"];
        check_keys(s, "output", {"dir", "dump_every", "snapshots"});
        c.output.dir = get_str(s, "output", "dir", c.output.dir);
        c.output.dump_every = get_int(s, "output", "dump_every", c.output.dump_every);
        if (s.contains("snapshots")) {
            if (!s["snapshots"].is_boolean()) {
                throw ConfigError("output.snapshots: expected a boolean");
            }
            c.output.snapshots = s["snapshots"].get<bool>();
        }
        if (c.output.dump_every < 1) throw ConfigError("output.dump_every: must be at least 1");
    }

    return c;
}

ScenarioConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string emit_config(const ScenarioConfig& c) {
    json j;
    j["seed"] = c.seed;
    j["scenario"] = {{"preset", c.scenario.preset},
                     {"domain_radius", c.scenario.domain_radius},
                     {"ellipse_a", c.scenario.ellipse_a},
                     {"ellipse_b", c.scenario.ellipse_b},
                     {"solid_radius", c.scenario.solid_radius},
                     {"solid_density", c.scenario.solid_density},
                     {"geometry_file", c.scenario.geometry_file}};
    j["initial"] = {{"h0", {c.initial.h0.x(), c.initial.h0.y()}},
                    {"theta0", c.initial.theta0},
                    {"l0", {c.initial.l0.x(), c.initial.l0.y()}},
                    {"r0", c.initial.r0},
                    {"gamma_body", c.initial.gamma_body},
                    {"gamma_holes", c.initial.gamma_holes},
                    {"vorticity",
                     {{"preset", c.initial.vorticity.preset},
                      {"amplitude", c.initial.vorticity.amplitude},
                      {"center", {c.initial.vorticity.center.x(), c.initial.vorticity.center.y()}},
                      {"radius", c.initial.vorticity.radius},
                      {"separation", c.initial.vorticity.separation},
                      {"count", c.initial.vorticity.count}}}};
    j["numerics"] = {{"panels", c.numerics.panels},
                     {"particles", c.numerics.particles},
                     {"dt", c.numerics.dt},
                     {"cfl", c.numerics.cfl},
                     {"quad_resolution", c.numerics.quad_resolution},
                     {"eps_blob", c.numerics.eps_blob},
                     {"d_min", c.numerics.d_min},
                     {"t_end", c.numerics.t_end},
                     {"flow_substeps", c.numerics.flow_substeps}};
    j["ns"] = {{"grid", c.ns.grid}, {"eta", c.ns.eta}, {"gravity", c.ns.gravity}};
    j["uniqueness"] = {{"mode", c.uniqueness.mode},
                       {"channel", c.uniqueness.channel},
                       {"epsilons", c.uniqueness.epsilons},
                       {"times", c.uniqueness.times}};
    j["output"] = {{"dir", c.output.dir},
                   {"dump_every", c.output.dump_every},
                   {"snapshots", c.output.snapshots}};
    return j.dump(2);
}

}  // namespace bodyflow
