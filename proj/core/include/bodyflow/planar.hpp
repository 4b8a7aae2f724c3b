// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <Eigen/Dense>
#include <cmath>

namespace bodyflow {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Rotation by +90 degrees: (x, y) -> (-y, x).
inline Vec2 perp(const Vec2& v) { return Vec2(-v.y(), v.x()); }

inline Mat2 rotation_matrix(double theta) {
    const double c = std::cos(theta), s = std::sin(theta);
    Mat2 q;
    q << c, -s, s, c;
    return q;
}

inline double cross2(const Vec2& a, const Vec2& b) {
    return a.x() * b.y() - a.y() * b.x();
}

/// Outcome of a time-marching run; collision is a legitimate termination
/// mode, distinct from failure.
enum class RunStatus { Completed, Collision };

}  // namespace bodyflow
