// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "bodyflow/geometry.hpp"
#include "bodyflow/potential_flow.hpp"
#include "bodyflow/quadrature.hpp"
#include "bodyflow/rigid_motion.hpp"

namespace bodyflow {

struct EulerParams {
    int total_panels = 256;
    double dt = 0.0;          ///< 0 picks cfl * min panel length / max speed
    double cfl = 0.5;
    double t_end = 1.0;
    double d_min = 0.0;       ///< collision threshold; 0 picks 2 body panel lengths
    int quad_resolution = 128;
    int quad_subsamples = 8;
};

/// Full configuration of the coupled system at one time, with the elliptic
/// solves for that time cached.
struct EulerState {
    double t = 0.0;
    RigidState solid;
    VorticityField vorticity;
    std::shared_ptr<const PanelSystem> panels;
    std::shared_ptr<const FlowSolution> flow;
    std::shared_ptr<const KirchhoffSet> kirchhoff;
    std::shared_ptr<const AddedMass> am;
};

struct EulerMonitorRow {
    double t = 0.0;
    RigidState solid;
    double energy = 0.0;                 ///< |u|^2_L2 + m|l|^2 + J|r|^2
    std::vector<double> circulations;    ///< quadrature, body then holes
    double clearance = 0.0;
    double sum_abs_strength = 0.0;
};

struct EulerRunResult {
    RunStatus status = RunStatus::Completed;
    std::vector<EulerMonitorRow> monitors;
    double final_time = 0.0;
};

class EulerSim {
public:
    EulerSim(DomainGeometry domain, SolidShape solid, RigidState initial,
             VorticityField vorticity, EulerParams params);

    const EulerState& state() const { return state_; }
    const DomainGeometry& domain() const { return domain_; }
    const SolidShape& solid_shape() const { return solid_; }
    const EulerParams& params() const { return params_; }

    /// Accelerations (ldot, rdot) of the current state from the added-mass
    /// Newton law.
    Vec3 solid_rhs() const;

    double auto_dt() const;
    double collision_threshold() const;

    /// One RK4 step of particles and solid together, elliptic solves
    /// refreshed per stage. Returns Collision when the clearance falls to the
    /// threshold.
    RunStatus step(double dt);

    EulerRunResult run();

    /// Velocity reversal (strengths, circulations, solid velocities flip);
    /// the dynamics are time reversible.
    void negate_motion();

    EulerMonitorRow monitor_row() const;
    double energy() const;
    ClosedCurve placed_body() const;

    /// Snapshots for comparison studies: state copies at requested times.
    struct Snapshot {
        double t;
        RigidState solid;
        VorticityField vorticity;
    };
    EulerRunResult run_with_snapshots(const std::vector<double>& times,
                                      std::vector<Snapshot>& out);

    /// Rebuilds the cached elliptic solves for an arbitrary state copy.
    EulerState rebuild(double t, const RigidState& solid, const VorticityField& w) const;

private:
    DomainGeometry domain_;
    SolidShape solid_;
    EulerParams params_;
    EulerState state_;
    mutable MaskedGrid grid_;

    struct Derivative {
        std::vector<Vec2> xdot;
        Vec2 hdot;
        double thetadot;
        Vec2 ldot;
        double rdot;
    };
    struct Stage {
        std::vector<Vec2> xs;
        RigidState solid;
    };
    Derivative eval_rhs(const Stage& y) const;
    static Stage advance_stage(const Stage& y0, const Derivative& k, double dt);
    Vec3 solid_accel(const EulerState& cache) const;
    EulerState make_cache(double t, const RigidState& solid, const VorticityField& w) const;
    void enforce_containment(std::vector<Vec2>& xs, const RigidState& solid) const;
};

}  // namespace bodyflow
