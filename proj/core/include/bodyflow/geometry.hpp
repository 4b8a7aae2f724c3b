// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bodyflow/planar.hpp"
#include "bodyflow/rigid_motion.hpp"

namespace bodyflow {

/// Simple closed polyline; the segment from points.back() to points.front()
/// closes the loop. Analytic presets are sampled densely enough that the
/// polyline is the curve for every tolerance used here.
struct ClosedCurve {
    std::vector<Vec2> points;

    /// Optional analytic tag: exact circle (centre, radius). Set by the disk
    /// presets and used for fast distance/inclusion queries.
    std::optional<Vec2> circle_center;
    double circle_radius = 0.0;

    double signed_area() const;
    double perimeter() const;
    Vec2 centroid() const;
    bool is_ccw() const { return signed_area() > 0.0; }
    void reverse();
    /// Winding-number inclusion test (analytic for tagged circles).
    bool contains(const Vec2& x) const;
    /// Distance to the curve itself (zero only on the curve); analytic for
    /// tagged circles, otherwise min over edges.
    double boundary_distance(const Vec2& x) const;
    /// Signed distance to the enclosed region: negative inside.
    double signed_distance(const Vec2& x) const;

    ClosedCurve transformed(const RigidMotion& g) const;
};

ClosedCurve circle_curve(const Vec2& c, double radius, int samples = 2048);
ClosedCurve ellipse_curve(const Vec2& c, double a, double b, int samples = 4096);

/// One straight collocation panel. `tangent` follows the stored traversal of
/// the owning loop and `normal = -perp(tangent)`, so with all loops stored
/// "fluid on the left" the normal points out of the fluid everywhere.
struct Panel {
    Vec2 a, b;      ///< endpoints
    Vec2 mid;       ///< collocation point
    Vec2 tangent;   ///< unit, along traversal
    Vec2 normal;    ///< unit, out of the fluid
    double len = 0.0;
};

/// Resamples the curve by arc length into n panels with endpoints on the
/// polyline. Throws std::invalid_argument for n < 8 or a self-intersecting
/// input.
std::vector<Panel> panelize(const ClosedCurve& curve, int n);

struct MassProperties {
    double mass = 0.0;
    double inertia = 0.0;  ///< about the centroid
    Vec2 centroid{0.0, 0.0};
};

/// Exact polygon integrals of the constant density: mass, centroid and the
/// centroidal second moment. Throws on zero area or non-positive density.
MassProperties mass_properties(const ClosedCurve& boundary, double density);

/// Rigid body shape in its own frame. The input boundary is translated so the
/// centroid sits at the origin.
struct SolidShape {
    ClosedCurve boundary;  ///< body frame, centroid at origin, stored CCW
    double density = 1.0;
    double mass = 0.0;
    double inertia = 0.0;

    /// Boundary resampled for panel generation (body frame, CCW).
    std::vector<Vec2> reference_vertices;

    ClosedCurve placed(const RigidMotion& g) const { return boundary.transformed(g); }
};

SolidShape make_solid(ClosedCurve boundary, double density, int panel_count);
SolidShape disk_solid(double radius, double density, int panel_count);

/// Fixed fluid container: one outer boundary and g interior holes.
struct DomainGeometry {
    ClosedCurve outer;               ///< stored CCW
    std::vector<ClosedCurve> holes;  ///< stored CW (fluid on the left)

    int genus() const { return static_cast<int>(holes.size()); }
    bool contains(const Vec2& x) const;  ///< inside outer, outside all holes
    double wall_distance(const Vec2& x) const;
    void bounding_box(Vec2& lo, Vec2& hi) const;
};

DomainGeometry disk_domain(double radius);
DomainGeometry ellipse_domain(double a, double b);

enum class LoopRole { Body, Hole, Outer };

struct BoundaryLoop {
    LoopRole role = LoopRole::Outer;
    std::vector<Panel> panels;
    /// +1 when the stored traversal runs counterclockwise. Circulations are
    /// always reported against the counterclockwise tangent, so quadrature
    /// along the stored direction is multiplied by this sign.
    double ccw_sign = 1.0;
    double perimeter() const;
};

/// Discretized boundaries of the fluid region for one solid placement:
/// loop order is [body?][holes...][outer].
struct PanelSystem {
    std::vector<BoundaryLoop> loops;
    bool has_body = false;
    Vec2 body_interior{0.0, 0.0};            ///< a point strictly inside the solid
    std::vector<Vec2> hole_interiors;        ///< one point inside each hole

    int total_panels() const;
    const BoundaryLoop& body() const { return loops.front(); }
    const BoundaryLoop& outer() const { return loops.back(); }
    /// Cycles carrying a circulation constraint: body first, then holes.
    int cycles() const { return (has_body ? 1 : 0) + static_cast<int>(hole_interiors.size()); }
    double min_panel_length() const;
    double mean_body_panel_length() const;
};

/// Body share of a scene-wide panel budget (perimeter proportional, body
/// weighted 4x). Pass the result to make_solid, then the same budget here.
int recommended_body_panels(const DomainGeometry& domain, double body_perimeter,
                            int total_panels);

/// Builds the collocation panels: the body at its reference resolution, the
/// remaining budget split over walls proportionally to perimeter (at least 16
/// per loop). The body and holes are traversed clockwise, the outer boundary
/// counterclockwise, so the fluid stays on the left everywhere.
PanelSystem build_panels(const DomainGeometry& domain, const SolidShape* solid,
                         const RigidMotion& body_placement, int total_panels);

struct Clearance {
    double distance = 0.0;
    bool collision = false;
};

/// Minimum distance between the placed solid boundary and the domain walls.
/// Overlap (or the solid escaping the domain) reports distance zero with the
/// collision flag set.
Clearance clearance(const DomainGeometry& domain, const ClosedCurve& placed_solid);

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d);
double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b);

/// Nearest point on the curve to x.
Vec2 project_to_curve(const ClosedCurve& curve, const Vec2& x);

}  // namespace bodyflow
