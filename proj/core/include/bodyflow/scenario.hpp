// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <optional>

#include "bodyflow/config.hpp"
#include "bodyflow/euler_sim.hpp"
#include "bodyflow/ns_sim.hpp"
#include "bodyflow/uniqueness.hpp"

namespace bodyflow {

/// Everything a run needs, assembled from a config.
struct Scene {
    DomainGeometry domain;
    SolidShape solid;
    RigidState initial;
    VorticityField vorticity;          ///< particle sampling of the preset
    NsSim::StreamFn initial_stream;    ///< stream-function form for the grid solver
    EulerParams euler_params;
    NsParams ns_params;
};

Scene build_scene(const ScenarioConfig& config);

DomainGeometry build_domain(const ScenarioConfig& config);
SolidShape build_solid(const ScenarioConfig& config, const DomainGeometry& domain);

EulerSim make_euler_sim(const Scene& scene);
NsSim make_ns_sim(const Scene& scene);

/// Reads the curve/density geometry file (documented in the README):
/// {"outer": [[x,y],...], "holes": [[[x,y],...],...],
///  "solid": {"points": [[x,y],...], "density": d}}.
struct GeometryFile {
    DomainGeometry domain;
    ClosedCurve solid_boundary;
    double solid_density = 1.0;
};
GeometryFile load_geometry_file(const std::string& path);

/// Runs the perturbation-decay study configured in `config.uniqueness`.
DecayStudy run_decay_study(const ScenarioConfig& config);

}  // namespace bodyflow
