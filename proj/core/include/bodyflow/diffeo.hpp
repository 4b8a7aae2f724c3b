// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <memory>

#include "bodyflow/geometry.hpp"
#include "bodyflow/rigid_motion.hpp"

namespace bodyflow {

struct DiffeoParams {
    double delta = 0.0;  ///< cutoff band width; 0 picks clearance/3
    int substeps = 32;   ///< RK4 substeps for the generating flow
};

/// Volume-preserving map of the container that equals the rigid motion near
/// the solid and the identity near the walls. Built as the time-1 flow of a
/// divergence-free interpolation field; forward, inverse and Jacobian come
/// from forward/reverse-time integration with the variational equation.
class DiffeoMap {
public:
    DiffeoMap(const RigidMotion& tau, const DomainGeometry& domain, ClosedCurve body_reference,
              DiffeoParams params);

    Vec2 forward(const Vec2& x) const;
    Vec2 inverse(const Vec2& x) const;
    /// Jacobian of the forward map at x.
    Mat2 jacobian(const Vec2& x) const;
    void forward_with_jacobian(const Vec2& x, Vec2& y, Mat2& j) const;
    /// Inverse point and the Jacobian of the inverse map at x.
    void inverse_with_jacobian(const Vec2& x, Vec2& y, Mat2& j) const;

    const RigidMotion& motion() const { return tau_; }
    double delta() const { return params_.delta; }

    /// Interpolation field of the construction (time in [0,1]); exposed for
    /// direct checks.
    Vec2 generating_field(double t, const Vec2& x) const;

private:
    RigidMotion tau_;
    Twist xi_;
    ClosedCurve body_ref_;
    DiffeoParams params_;

    Mat2 field_gradient(double t, const Vec2& x) const;
    void flow(const Vec2& x0, bool reverse, bool with_jacobian, Vec2& y, Mat2& j) const;
};

/// Builds the map for the relative motion tau, checking that the moved solid
/// keeps three cutoff widths of wall clearance along the whole screw path.
/// Throws std::domain_error when the motion is inadmissible.
DiffeoMap build_psi(const RigidMotion& tau, const DomainGeometry& domain,
                    const ClosedCurve& body_reference, DiffeoParams params = {});

/// Comparison map between two placements: phi = Psi[tau2] o Psi[tau1]^{-1},
/// carrying the fluid region of motion 1 onto that of motion 2.
class CompareMap {
public:
    CompareMap(DiffeoMap psi1, DiffeoMap psi2)
        : psi1_(std::move(psi1)), psi2_(std::move(psi2)) {}

    Vec2 forward(const Vec2& x) const { return psi2_.forward(psi1_.inverse(x)); }
    Vec2 inverse(const Vec2& x) const { return psi1_.forward(psi2_.inverse(x)); }
    void forward_with_jacobian(const Vec2& x, Vec2& y, Mat2& j) const;

    const DiffeoMap& psi1() const { return psi1_; }
    const DiffeoMap& psi2() const { return psi2_; }

private:
    DiffeoMap psi1_, psi2_;
};

CompareMap compare_maps(const RigidMotion& tau1, const RigidMotion& tau2,
                        const DomainGeometry& domain, const ClosedCurve& body_reference,
                        DiffeoParams params = {});

using VelocityEvaluator = std::function<Vec2(const Vec2&)>;

/// Pullback of a velocity field on the image region:
/// u_tilde(x) = [d phi(x)]^{-1} u(phi(x)). Volume preservation keeps the
/// result divergence free. Throws std::runtime_error when |det dphi - 1|
/// exceeds the flow tolerance.
VelocityEvaluator pullback_velocity(VelocityEvaluator u, std::shared_ptr<const CompareMap> phi);

}  // namespace bodyflow
