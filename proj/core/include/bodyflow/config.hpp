// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "bodyflow/planar.hpp"

namespace bodyflow {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct ScenarioConfig {
    struct Scenario {
        std::string preset = "disk-in-disk";  // disk-in-disk | disk-in-ellipse | two-hole | custom
        double domain_radius = 3.0;
        double ellipse_a = 3.0;
        double ellipse_b = 2.0;
        double solid_radius = 0.5;
        double solid_density = 2.0;
        std::string geometry_file;            // custom preset only
    } scenario;

    struct Vorticity {
        std::string preset = "none";  // none | single-blob | pair | random-seeded
        double amplitude = 1.0;
        Vec2 center{-1.2, 0.0};
        double radius = 0.25;
        double separation = 0.6;
        int count = 4;
    };

    struct Initial {
        Vec2 h0{0.0, 0.0};
        double theta0 = 0.0;
        Vec2 l0{0.0, 0.0};
        double r0 = 0.0;
        Vorticity vorticity;
        double gamma_body = 0.0;
        std::vector<double> gamma_holes;
    } initial;

    struct Numerics {
        int panels = 256;
        int particles = 2000;
        double dt = 0.0;
        double cfl = 0.5;
        int quad_resolution = 128;
        double eps_blob = 0.0;
        double d_min = 0.0;
        double t_end = 1.0;
        int flow_substeps = 32;
    } numerics;

    struct Ns {
        int grid = 128;
        double eta = 1e-8;
        double gravity = 0.0;
    } ns;

    struct Uniqueness {
        std::string mode = "euler";  // euler | ns
        std::string channel = "l0";  // l0 | r0 | vorticity
        std::vector<double> epsilons{1e-2, 1e-3, 1e-4, 1e-5};
        std::vector<double> times{0.1, 0.25};
    } uniqueness;

    struct Output {
        std::string dir = "out";
        int dump_every = 1;
        bool snapshots = false;
    } output;

    unsigned long long seed = 1;
};

/// Parses and validates a JSON config file. Unknown keys and out-of-range
/// values are rejected with the offending field named.
ScenarioConfig parse_config(const std::string& path);
ScenarioConfig parse_config_text(const std::string& text);

/// Serializes the fully-defaulted config; parsing the result reproduces it.
std::string emit_config(const ScenarioConfig& config);

}  // namespace bodyflow
