// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include "bodyflow/planar.hpp"

namespace bodyflow {

/// Instantaneous state of the solid: centre of mass, orientation and the
/// associated velocities.
struct RigidState {
    Vec2 h{0.0, 0.0};   ///< centre of mass [m]
    double theta = 0.0; ///< rotation angle relative to the reference pose [rad]
    Vec2 l{0.0, 0.0};   ///< linear velocity [m/s]
    double r = 0.0;     ///< angular velocity [rad/s]
};

/// Velocity of the material point x of a solid in state s: l + r (x - h)^perp.
inline Vec2 solid_velocity(const RigidState& s, const Vec2& x) {
    return s.l + s.r * perp(x - s.h);
}

/// A planar rigid placement x -> Q(theta) x + b.
class RigidMotion {
public:
    RigidMotion() = default;
    RigidMotion(double theta, const Vec2& b) : theta_(theta), b_(b) {}

    Vec2 operator()(const Vec2& x) const { return rotation_matrix(theta_) * x + b_; }

    double angle() const { return theta_; }
    const Vec2& translation() const { return b_; }
    Mat2 rotation() const { return rotation_matrix(theta_); }

    /// this after other: (this*other)(x) = this(other(x)).
    RigidMotion compose(const RigidMotion& other) const {
        return RigidMotion(theta_ + other.theta_, rotation_matrix(theta_) * other.b_ + b_);
    }
    RigidMotion inverse() const {
        return RigidMotion(-theta_, -(rotation_matrix(-theta_) * b_));
    }

    /// Component-wise distance used as the SE(2) norm: |dtheta| plus |db|.
    double distance_to(const RigidMotion& o) const;

private:
    double theta_ = 0.0;
    Vec2 b_{0.0, 0.0};
};

struct Twist {
    Vec2 l{0.0, 0.0};
    double r = 0.0;
};

/// Time-1 value of the screw flow  d/dt tau(t,x) = l + r (tau(t,x) - t l)^perp.
/// The closed form is tau(t,x) = Q(r t) x + t l, so exp(l, r) = (theta=r, b=l).
RigidMotion se2_exp(const Vec2& l, double r);

/// Intermediate state of the same flow at time t in [0,1].
RigidMotion se2_screw(const Twist& xi, double t);

/// Inverse of se2_exp on { |theta| < pi }. Throws std::domain_error outside.
Twist se2_log(const RigidMotion& tau);

/// One RK4 step of h' = l, theta' = r, l' = ldot, r' = rdot with the
/// accelerations held constant over the step.
RigidState advance_rigid(const RigidState& s, const Vec2& ldot, double rdot, double dt);

/// Placement mapping the body reference pose at (h_ref, theta=0) to s:
/// x -> Q(s.theta)(x - h_ref) + s.h.
RigidMotion placement(const RigidState& s, const Vec2& h_ref);

}  // namespace bodyflow
