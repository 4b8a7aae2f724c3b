#include "bodyflow/rigid_motion.hpp"

#include <stdexcept>

namespace bodyflow {

double RigidMotion::distance_to(const RigidMotion& o) const {
    return std::abs(theta_ - o.theta_) + (b_ - o.b_).norm();
}

RigidMotion se2_exp(const Vec2& l, double r) { return RigidMotion(r, l); }

RigidMotion se2_screw(const Twist& xi, double t) {
    return RigidMotion(xi.r * t, t * xi.l);
}

Twist se2_log(const RigidMotion& tau) {
    if (std::abs(tau.angle()) >= M_PI) {
        throw std::domain_error("se2_log: rotation angle outside (-pi, pi)");
    }
    return Twist{tau.translation(), tau.angle()};
}

RigidState advance_rigid(const RigidState& s, const Vec2& ldot, double rdot, double dt) {
    // RK4 on a system whose right hand side is affine in t; the result is the
    // exact uniformly-accelerated update.
    RigidState out = s;
    out.h = s.h + dt * s.l + 0.5 * dt * dt * ldot;
    out.theta = s.theta + dt * s.r + 0.5 * dt * dt * rdot;
    out.l = s.l + dt * ldot;
    out.r = s.r + dt * rdot;
    return out;
}

RigidMotion placement(const RigidState& s, const Vec2& h_ref) {
    return RigidMotion(s.theta, s.h - rotation_matrix(s.theta) * h_ref);
}

}  // namespace bodyflow
