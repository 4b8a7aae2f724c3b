// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <vector>

#include "bodyflow/diffeo.hpp"
#include "bodyflow/geometry.hpp"
#include "bodyflow/quadrature.hpp"
#include "bodyflow/rigid_motion.hpp"

namespace bodyflow {

/// One time sample of a run for the comparison functional: the solid state
/// plus a velocity evaluator on its fluid region.
struct FlowSample {
    double t = 0.0;
    RigidState solid;
    VelocityEvaluator velocity;
};

/// Difference functional between two runs at matched times, measured on the
/// fluid region of run 1 after pulling run 2 back through the comparison map.
struct HatRow {
    double t = 0.0;
    double u_sq = 0.0;      ///< |u1 - u2 pulled back|^2 over F1(t)
    double l_sq = 0.0;      ///< |l1 - Q1 Q2^-1 l2|^2
    double r_sq = 0.0;
    double h_sq = 0.0;
    double theta_sq = 0.0;
    double total = 0.0;
};

/// Evaluates the comparison energy at one time. `body_reference` is the
/// solid boundary at the shared initial placement; `reference` is that
/// placement's state. Throws std::domain_error when the placements leave the
/// admissible neighborhood of the comparison map.
HatRow hat_energy(const FlowSample& run1, const FlowSample& run2, const RigidState& reference,
                  const DomainGeometry& domain, const ClosedCurve& body_reference,
                  MaskedGrid& grid, int substeps = 32);

struct DecayEntry {
    double eps = 0.0;
    double t = 0.0;
    double energy = 0.0;
};

struct DecayStudy {
    std::vector<DecayEntry> table;       ///< all (eps, t, E) rows
    std::vector<double> times;
    std::vector<double> slopes;          ///< d log E / d log eps per time
    std::vector<double> self_energy;     ///< self-comparison E per time
    bool monotone_in_eps = true;         ///< E decreasing with eps at each time
    bool slopes_positive = true;
    bool slopes_nonincreasing = true;    ///< within a 0.2 slack
};

/// Least-squares slope of log(E) against log(eps).
double fit_slope(const std::vector<double>& eps, const std::vector<double>& energy);

void analyze_decay(DecayStudy& study);

}  // namespace bodyflow
