// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "bodyflow/geometry.hpp"
#include "bodyflow/rigid_motion.hpp"

namespace bodyflow {

struct VortexParticle {
    Vec2 x{0.0, 0.0};
    double strength = 0.0;  ///< circulation carried by the blob [m^2/s]
};

/// Lagrangian vorticity sample set plus the conserved boundary circulations.
/// Circulations are counterclockwise: positive gamma means counterclockwise
/// swirl around the component.
struct VorticityField {
    std::vector<VortexParticle> particles;
    double eps_blob = 0.05;              ///< blob core radius
    double gamma_body = 0.0;             ///< circulation around the solid
    std::vector<double> gamma_holes;     ///< circulation around each hole

    double sum_abs_strength() const;
};

/// Algebraic blob kernel: u(x) = strength/(2 pi) (x-xk)^perp / (|x-xk|^2 + eps^2).
Vec2 blob_velocity(const Vec2& center, double strength, double eps, const Vec2& x);
Mat2 blob_velocity_gradient(const Vec2& center, double strength, double eps, const Vec2& x);

/// Velocity field reconstructed from one elliptic solve: blob sum plus
/// boundary vortex sheets, one point vortex per topological cycle and a
/// compatibility point source inside the body.
class FlowSolution {
public:
    /// Velocity at x; `fast` collapses distant panels to point sources
    /// (volume-quadrature accuracy class).
    Vec2 velocity(const Vec2& x, bool fast = false) const;
    Mat2 velocity_gradient(const Vec2& x) const;

    /// Fluid-side velocity at a panel midpoint (principal value plus the
    /// tangential sheet jump).
    Vec2 boundary_velocity(int loop, int panel) const;

    /// Counterclockwise circulation around cycle c (0 = body, then holes),
    /// recomputed by midpoint quadrature of the fluid-side velocity.
    double circulation(int cycle) const;
    double prescribed_circulation(int cycle) const { return gamma_[cycle]; }
    int cycles() const { return static_cast<int>(gamma_.size()); }

    /// Max over collocation points of |u.n - data| re-evaluated after the solve.
    double max_bc_residual() const;

    const PanelSystem& panels() const { return *ps_; }
    const std::shared_ptr<const PanelSystem>& panels_ptr() const { return ps_; }
    double sheet_strength(int loop, int panel) const;
    double point_vortex_strength(int cycle) const { return kappa_[cycle]; }
    double compatibility_source() const { return source_q_; }

private:
    friend FlowSolution solve_flow(const VorticityField&, const RigidState&,
                                   std::shared_ptr<const PanelSystem>, struct FlowSolveDebug*);
    std::shared_ptr<const PanelSystem> ps_;
    std::vector<VortexParticle> particles_;
    double eps_ = 0.0;
    std::vector<std::vector<double>> sigma_;  ///< sheet strength per loop/panel
    std::vector<double> kappa_;               ///< cycle point vortices
    std::vector<Vec2> kappa_pos_;
    double source_q_ = 0.0;
    Vec2 source_pos_{0.0, 0.0};
    std::vector<double> gamma_;               ///< prescribed circulations
    std::vector<double> bc_data_;             ///< collocation normal data
};

struct FlowSolveDebug {
    Eigen::MatrixXd matrix;
    Eigen::VectorXd rhs;
    Eigen::VectorXd solution;
};

/// Solves curl u = omega, div u = 0 with impermeable walls, the rigid-body
/// normal data on the solid and the prescribed circulations.
FlowSolution solve_flow(const VorticityField& omega, const RigidState& state,
                        std::shared_ptr<const PanelSystem> panels,
                        FlowSolveDebug* debug = nullptr);

/// Unit-circulation harmonic basis: H_c has u.n = 0 on every boundary and
/// counterclockwise circulation delta_{cj} around cycle j. Empty when the
/// fluid region is simply connected.
std::vector<FlowSolution> harmonic_fields(std::shared_ptr<const PanelSystem> panels);

/// The three Neumann potentials of body translation/rotation, represented by
/// source sheets on all boundaries. Potentials are normalized to zero mean on
/// the body.
class KirchhoffSet {
public:
    double potential(int i, const Vec2& x) const;
    Vec2 grad(int i, const Vec2& x) const;
    /// All three gradients in one pass over the panels; `fast` collapses
    /// distant panels to point sources.
    void grads(const Vec2& x, Vec2 out[3], bool fast = false) const;
    /// Fluid-side gradient at a body panel midpoint.
    Vec2 body_grad(int i, int panel) const;
    double body_potential(int i, int panel) const { return body_phi_[i][panel]; }
    /// Neumann data K_i at a body panel midpoint.
    double neumann_data(int i, int panel) const { return k_data_[i][panel]; }

    const PanelSystem& panels() const { return *ps_; }
    const std::shared_ptr<const PanelSystem>& panels_ptr() const { return ps_; }

private:
    friend KirchhoffSet solve_kirchhoff(const RigidState&, std::shared_ptr<const PanelSystem>);
    std::shared_ptr<const PanelSystem> ps_;
    std::vector<std::vector<double>> lambda_;  ///< per potential, per global panel
    std::vector<std::vector<double>> body_phi_;
    std::vector<std::vector<double>> k_data_;
    double phi_offset_[3] = {0.0, 0.0, 0.0};
};

KirchhoffSet solve_kirchhoff(const RigidState& state, std::shared_ptr<const PanelSystem> panels);

struct AddedMass {
    Mat3 body = Mat3::Zero();   ///< diag(m, m, J)
    Mat3 fluid = Mat3::Zero();  ///< Gram matrix of the Kirchhoff gradients
    Mat3 total = Mat3::Zero();
    double asymmetry = 0.0;     ///< raw boundary-quadrature asymmetry, relative
};

/// Assembles the fluid added-mass matrix from the boundary form
/// sum Phi_i K_j dsigma (valid by Green's identity) and symmetrizes it; the
/// recorded asymmetry beyond the quadrature budget throws.
AddedMass added_mass(const KirchhoffSet& kirchhoff, double mass, double inertia);

}  // namespace bodyflow
