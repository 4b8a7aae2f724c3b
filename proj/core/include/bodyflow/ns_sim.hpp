// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include <Eigen/SparseCholesky>

#include "bodyflow/geometry.hpp"
#include "bodyflow/rigid_motion.hpp"

namespace bodyflow {

struct NsParams {
    int grid = 128;           ///< cells along the longer box edge
    double dt = 0.0;          ///< 0 picks the diffusive limit (viscosity is 1)
    double t_end = 1.0;
    double eta = 1e-8;        ///< wall penalization time scale
    double gravity = 0.0;     ///< magnitude of the buoyancy-corrected body force
    double d_min = 0.0;       ///< collision threshold; 0 picks 2 cells
    bool periodic = false;    ///< periodic box mode (no walls, no solid)
};

struct NsMonitorRow {
    double t = 0.0;
    RigidState solid;
    double kinetic_energy = 0.0;       ///< (1/2) integral of rho |u|^2
    double dissipation_integral = 0.0; ///< 2 int_0^t int rho Du:Du
    double energy_residual = 0.0;
    double max_divergence = 0.0;       ///< after the pressure projection
    double clearance = 0.0;
    double solid_mass = 0.0;           ///< cell-count mass of the density field
};

/// Copy of the staggered field at one time, detached from the solver.
struct NsFieldSample {
    Vec2 origin{0.0, 0.0};
    double h = 0.0;
    int nx = 0, ny = 0;
    std::vector<double> u, v;
    Vec2 velocity(const Vec2& x) const;  ///< bilinear on each component
};

/// Result of projecting a staggered velocity field onto rigid motions inside
/// the solid mask (density-weighted least squares).
struct RigidProjection {
    Vec2 l{0.0, 0.0};
    double r = 0.0;
    double momentum_x = 0.0;   ///< conserved rho-weighted moments
    double momentum_y = 0.0;
    double angular = 0.0;
};

/// Global-velocity penalized solver on a staggered grid: explicit advection
/// and diffusion, wall penalization, uniform pressure projection and a rigid
/// projection inside the solid. Viscosity and fluid density are 1.
class NsSim {
public:
    using StreamFn = std::function<double(const Vec2&)>;

    NsSim(DomainGeometry domain, std::optional<SolidShape> solid, RigidState initial,
          const StreamFn& initial_stream, NsParams params);

    /// Periodic box harness on [0,L]^2 (no walls, no solid).
    static NsSim periodic_box(double box_size, int grid, const StreamFn& initial_stream,
                              double t_end);

    RunStatus step();
    struct RunResult {
        RunStatus status = RunStatus::Completed;
        std::vector<NsMonitorRow> monitors;
        double final_time = 0.0;
    };
    RunResult run(int dump_every = 1);

    double dt() const { return dt_; }
    double time() const { return t_; }
    const RigidState& solid_state() const { return solid_state_; }
    NsMonitorRow monitor_row() const;

    double kinetic_energy() const;
    double max_divergence_now() const;     ///< of the current field
    double last_projection_divergence() const { return last_div_; }
    double dissipation_rate() const;       ///< 2 int rho Du:Du at the current state

    /// Velocity sampled bilinearly from the staggered components.
    Vec2 sample_velocity(const Vec2& x) const;
    NsFieldSample field_sample() const;
    Vec2 grid_origin() const { return origin_; }
    double cell_size() const { return h_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }

    /// Applies the rigid projection to the current field (idempotent);
    /// exposed for direct checks.
    RigidProjection rigid_project();

    /// Writes a plain-text field snapshot (header: nx ny h ox oy, then cell
    /// centered u v rho rows).
    void write_snapshot(const std::string& path) const;

private:
    DomainGeometry domain_;
    std::optional<SolidShape> solid_;
    RigidState solid_state_;
    NsParams params_;
    bool periodic_ = false;

    int nx_ = 0, ny_ = 0;
    double h_ = 0.0, dt_ = 0.0, t_ = 0.0;
    Vec2 origin_{0.0, 0.0};

    std::vector<double> u_, v_;        // staggered components
    std::vector<double> rho_;          // cell densities
    std::vector<char> cell_solid_;     // cell center in solid
    std::vector<char> uface_solid_, vface_solid_;
    std::vector<double> uface_open_, vface_open_;  // 1 inside the container
    double last_div_ = 0.0;
    double diss_integral_ = 0.0;
    double diss_rate_prev_ = 0.0;
    double energy0_ = 0.0;

    // Behind a pointer: the factorization object is pinned, the solver stays
    // movable.
    std::unique_ptr<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>> poisson_;
    std::vector<double> pressure_;

    int ui(int i, int j) const { return j * (nx_ + 1) + i; }
    int vi(int i, int j) const { return j * nx_ + i; }
    int ci(int i, int j) const { return j * nx_ + i; }

    void build_poisson();
    void rebuild_solid_masks();
    void apply_initial_stream(const StreamFn& stream);
    void project();
    void advect_diffuse();
    void penalize();
    void apply_gravity();
    double cell_dudx(int i, int j) const;
    ClosedCurve placed_solid() const;
    double collision_threshold() const;
};

}  // namespace bodyflow
