#include "bodyflow/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bodyflow {

namespace {

constexpr double kTiny = 1e-14;

int next_index(int i, int n) { return i + 1 == n ? 0 : i + 1; }

}  // namespace

double ClosedCurve::signed_area() const {
    const int n = static_cast<int>(points.size());
    double a = 0.0;
    for (int i = 0; i < n; ++i) a += cross2(points[i], points[next_index(i, n)]);
    return 0.5 * a;
}

double ClosedCurve::perimeter() const {
    const int n = static_cast<int>(points.size());
    double p = 0.0;
    for (int i = 0; i < n; ++i) p += (points[next_index(i, n)] - points[i]).norm();
    return p;
}

Vec2 ClosedCurve::centroid() const {
    const int n = static_cast<int>(points.size());
    double a = 0.0;
    Vec2 c(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        const Vec2& p = points[i];
        const Vec2& q = points[next_index(i, n)];
        const double w = cross2(p, q);
        a += w;
        c += w * (p + q);
    }
    if (std::abs(a) < kTiny) throw std::invalid_argument("centroid of a degenerate curve");
    return c / (3.0 * a);
}

void ClosedCurve::reverse() { std::reverse(points.begin(), points.end()); }

bool ClosedCurve::contains(const Vec2& x) const {
    if (circle_center) return (x - *circle_center).squaredNorm() < circle_radius * circle_radius;
    // Crossing-number test.
    const int n = static_cast<int>(points.size());
    bool in = false;
    for (int i = 0, j = n - 1; i < n; j = i++) {
        const Vec2& pi = points[i];
        const Vec2& pj = points[j];
        if ((pi.y() > x.y()) != (pj.y() > x.y())) {
            const double t = (x.y() - pi.y()) / (pj.y() - pi.y());
            if (x.x() < pi.x() + t * (pj.x() - pi.x())) in = !in;
        }
    }
    return in;
}

double ClosedCurve::boundary_distance(const Vec2& x) const {
    if (circle_center) return std::abs((x - *circle_center).norm() - circle_radius);
    const int n = static_cast<int>(points.size());
    double d = std::numeric_limits<double>::max();
    for (int i = 0; i < n; ++i) {
        d = std::min(d, point_segment_distance(x, points[i], points[next_index(i, n)]));
    }
    return d;
}

double ClosedCurve::signed_distance(const Vec2& x) const {
    if (circle_center) return (x - *circle_center).norm() - circle_radius;
    const double d = boundary_distance(x);
    return contains(x) ? -d : d;
}

ClosedCurve ClosedCurve::transformed(const RigidMotion& g) const {
    ClosedCurve out;
    out.points.reserve(points.size());
    for (const Vec2& p : points) out.points.push_back(g(p));
    if (circle_center) {
        out.circle_center = g(*circle_center);
        out.circle_radius = circle_radius;
    }
    return out;
}

ClosedCurve circle_curve(const Vec2& c, double radius, int samples) {
    ClosedCurve curve;
    curve.points.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double phi = 2.0 * M_PI * i / samples;
        curve.points.emplace_back(c.x() + radius * std::cos(phi), c.y() + radius * std::sin(phi));
    }
    curve.circle_center = c;
    curve.circle_radius = radius;
    return curve;
}

ClosedCurve ellipse_curve(const Vec2& c, double a, double b, int samples) {
    ClosedCurve curve;
    curve.points.reserve(samples);
    for (int i = 0; i < samples; ++i) {
        const double phi = 2.0 * M_PI * i / samples;
        curve.points.emplace_back(c.x() + a * std::cos(phi), c.y() + b * std::sin(phi));
    }
    return curve;
}

namespace {

std::vector<Vec2> resample_by_arclength(const ClosedCurve& curve, int n) {
    const int m = static_cast<int>(curve.points.size());
    std::vector<double> cum(m + 1, 0.0);
    for (int i = 0; i < m; ++i) {
        cum[i + 1] = cum[i] + (curve.points[next_index(i, m)] - curve.points[i]).norm();
    }
    const double total = cum[m];
    if (total < kTiny) throw std::invalid_argument("panelize: degenerate curve");

    std::vector<Vec2> out;
    out.reserve(n);
    int seg = 0;
    for (int k = 0; k < n; ++k) {
        const double s = total * k / n;
        while (seg + 1 < m && cum[seg + 1] < s - 1e-12 * total) ++seg;
        const double ds = cum[seg + 1] - cum[seg];
        double t = ds > kTiny ? (s - cum[seg]) / ds : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        // Snap to shared vertices so presets sampled at multiples of n stay exact.
        if (t < 1e-9) t = 0.0;
        if (t > 1.0 - 1e-9) {
            t = 0.0;
            ++seg;
        }
        const Vec2& p = curve.points[seg % m];
        const Vec2& q = curve.points[next_index(seg % m, m)];
        out.push_back(p + t * (q - p));
    }
    return out;
}

std::vector<Panel> panels_from_vertices(const std::vector<Vec2>& v) {
    const int n = static_cast<int>(v.size());
    std::vector<Panel> panels(n);
    for (int i = 0; i < n; ++i) {
        Panel& p = panels[i];
        p.a = v[i];
        p.b = v[next_index(i, n)];
        p.mid = 0.5 * (p.a + p.b);
        const Vec2 d = p.b - p.a;
        p.len = d.norm();
        if (p.len < kTiny) throw std::invalid_argument("panelize: zero-length panel");
        p.tangent = d / p.len;
        p.normal = -perp(p.tangent);
    }
    return panels;
}

void check_simple(const std::vector<Vec2>& v) {
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (j == i || next_index(j, n) == i || next_index(i, n) == j) continue;
            if (segments_intersect(v[i], v[next_index(i, n)], v[j], v[next_index(j, n)])) {
                throw std::invalid_argument("panelize: self-intersecting curve");
            }
        }
    }
}

}  // namespace

std::vector<Panel> panelize(const ClosedCurve& curve, int n) {
    if (n < 3) throw std::invalid_argument("panelize: need at least 3 panels");
    if (curve.points.size() < 3) throw std::invalid_argument("panelize: need a closed curve");
    std::vector<Vec2> v = resample_by_arclength(curve, n);
    check_simple(v);
    return panels_from_vertices(v);
}

MassProperties mass_properties(const ClosedCurve& boundary, double density) {
    if (density <= 0.0) throw std::invalid_argument("solid density must be positive");
    ClosedCurve c = boundary;
    if (!c.is_ccw()) c.reverse();
    const int n = static_cast<int>(c.points.size());
    double a2 = 0.0, ixy = 0.0;
    Vec2 first(0.0, 0.0);
    for (int i = 0; i < n; ++i) {
        const Vec2& p = c.points[i];
        const Vec2& q = c.points[next_index(i, n)];
        const double w = cross2(p, q);
        a2 += w;
        first += w * (p + q);
        ixy += w * (p.squaredNorm() + p.dot(q) + q.squaredNorm());
    }
    const double area = 0.5 * a2;
    if (area < 1e-12) throw std::invalid_argument("solid shape has (near) zero area");
    MassProperties mp;
    mp.mass = density * area;
    mp.centroid = first / (3.0 * a2);
    const double about_origin = density * ixy / 12.0;
    mp.inertia = about_origin - mp.mass * mp.centroid.squaredNorm();
    return mp;
}

SolidShape make_solid(ClosedCurve boundary, double density, int panel_count) {
    if (!boundary.is_ccw()) boundary.reverse();
    MassProperties mp = mass_properties(boundary, density);
    for (Vec2& p : boundary.points) p -= mp.centroid;
    if (boundary.circle_center) *boundary.circle_center -= mp.centroid;

    SolidShape s;
    s.boundary = std::move(boundary);
    s.density = density;
    s.mass = mp.mass;
    s.inertia = mp.inertia;
    if (s.boundary.circle_center) {
        // Exact regular polygon for disks; keeps placements exactly symmetric.
        const double r = s.boundary.circle_radius;
        const Vec2 c = *s.boundary.circle_center;
        s.reference_vertices.reserve(panel_count);
        for (int i = 0; i < panel_count; ++i) {
            const double phi = 2.0 * M_PI * i / panel_count;
            s.reference_vertices.emplace_back(c.x() + r * std::cos(phi), c.y() + r * std::sin(phi));
        }
    } else {
        for (const Panel& p : panelize(s.boundary, panel_count)) s.reference_vertices.push_back(p.a);
    }
    return s;
}

SolidShape disk_solid(double radius, double density, int panel_count) {
    return make_solid(circle_curve(Vec2(0.0, 0.0), radius), density, panel_count);
}

bool DomainGeometry::contains(const Vec2& x) const {
    if (!outer.contains(x)) return false;
    for (const ClosedCurve& h : holes) {
        if (h.contains(x)) return false;
    }
    return true;
}

double DomainGeometry::wall_distance(const Vec2& x) const {
    double d = outer.boundary_distance(x);
    for (const ClosedCurve& h : holes) d = std::min(d, h.boundary_distance(x));
    return d;
}

void DomainGeometry::bounding_box(Vec2& lo, Vec2& hi) const {
    lo = Vec2(std::numeric_limits<double>::max(), std::numeric_limits<double>::max());
    hi = -lo;
    for (const Vec2& p : outer.points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
}

DomainGeometry disk_domain(double radius) {
    DomainGeometry g;
    g.outer = circle_curve(Vec2(0.0, 0.0), radius);
    return g;
}

DomainGeometry ellipse_domain(double a, double b) {
    DomainGeometry g;
    g.outer = ellipse_curve(Vec2(0.0, 0.0), a, b);
    return g;
}

double BoundaryLoop::perimeter() const {
    double p = 0.0;
    for (const Panel& pn : panels) p += pn.len;
    return p;
}

int PanelSystem::total_panels() const {
    int n = 0;
    for (const BoundaryLoop& l : loops) n += static_cast<int>(l.panels.size());
    return n;
}

double PanelSystem::min_panel_length() const {
    double m = std::numeric_limits<double>::max();
    for (const BoundaryLoop& l : loops) {
        for (const Panel& p : l.panels) m = std::min(m, p.len);
    }
    return m;
}

double PanelSystem::mean_body_panel_length() const {
    if (!has_body) return min_panel_length();
    return body().perimeter() / static_cast<double>(body().panels.size());
}

namespace {

BoundaryLoop loop_from_vertices(std::vector<Vec2> v, LoopRole role, bool want_ccw) {
    // Vertices arrive CCW; reverse when the loop must run clockwise.
    if (!want_ccw) std::reverse(v.begin(), v.end());
    BoundaryLoop loop;
    loop.role = role;
    loop.panels = panels_from_vertices(v);
    loop.ccw_sign = want_ccw ? 1.0 : -1.0;
    return loop;
}

std::vector<Vec2> ccw_vertices(const ClosedCurve& curve, int n) {
    ClosedCurve c = curve;
    if (!c.is_ccw()) c.reverse();
    return resample_by_arclength(c, n);
}

}  // namespace

int recommended_body_panels(const DomainGeometry& domain, double body_perimeter,
                            int total_panels) {
    // Perimeter-proportional split with the body weighted 4x: the body
    // boundary drives the force accuracy.
    double wall = domain.outer.perimeter();
    for (const ClosedCurve& h : domain.holes) wall += h.perimeter();
    const double w = 4.0 * body_perimeter;
    int n = static_cast<int>(std::lround(total_panels * w / (w + wall)));
    return std::clamp(n, 16, total_panels / 2);
}

PanelSystem build_panels(const DomainGeometry& domain, const SolidShape* solid,
                         const RigidMotion& body_placement, int total_panels) {
    PanelSystem ps;
    int wall_budget = total_panels;
    if (solid) {
        std::vector<Vec2> v;
        v.reserve(solid->reference_vertices.size());
        for (const Vec2& p : solid->reference_vertices) v.push_back(body_placement(p));
        ps.loops.push_back(loop_from_vertices(std::move(v), LoopRole::Body, false));
        ps.has_body = true;
        ps.body_interior = body_placement(Vec2(0.0, 0.0));
        wall_budget -= static_cast<int>(solid->reference_vertices.size());
    }
    wall_budget = std::max(wall_budget, 16 * (1 + domain.genus()));

    double wall_perim = domain.outer.perimeter();
    for (const ClosedCurve& h : domain.holes) wall_perim += h.perimeter();
    for (const ClosedCurve& h : domain.holes) {
        const int n = std::max(16, static_cast<int>(std::lround(wall_budget * h.perimeter() / wall_perim)));
        ps.loops.push_back(loop_from_vertices(ccw_vertices(h, n), LoopRole::Hole, false));
        ps.hole_interiors.push_back(h.centroid());
    }
    int used = 0;
    for (std::size_t i = (solid ? 1 : 0); i < ps.loops.size(); ++i) {
        used += static_cast<int>(ps.loops[i].panels.size());
    }
    const int n_outer = std::max(16, wall_budget - used);
    ps.loops.push_back(
        loop_from_vertices(ccw_vertices(domain.outer, n_outer), LoopRole::Outer, true));
    return ps;
}

Vec2 project_to_curve(const ClosedCurve& curve, const Vec2& x) {
    if (curve.circle_center) {
        const Vec2 d = x - *curve.circle_center;
        const double n = d.norm();
        if (n < kTiny) return *curve.circle_center + Vec2(curve.circle_radius, 0.0);
        return *curve.circle_center + curve.circle_radius / n * d;
    }
    const int n = static_cast<int>(curve.points.size());
    double best = std::numeric_limits<double>::max();
    Vec2 nearest = curve.points.front();
    for (int i = 0; i < n; ++i) {
        const Vec2& a = curve.points[i];
        const Vec2& b = curve.points[next_index(i, n)];
        const Vec2 ab = b - a;
        const double len2 = ab.squaredNorm();
        const double t = len2 < kTiny ? 0.0 : std::clamp((x - a).dot(ab) / len2, 0.0, 1.0);
        const Vec2 p = a + t * ab;
        const double d = (x - p).squaredNorm();
        if (d < best) {
            best = d;
            nearest = p;
        }
    }
    return nearest;
}

double point_segment_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    if (len2 < kTiny) return (p - a).norm();
    const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return (p - (a + t * ab)).norm();
}

namespace {
int orient(const Vec2& a, const Vec2& b, const Vec2& c) {
    const double v = cross2(b - a, c - a);
    if (v > kTiny) return 1;
    if (v < -kTiny) return -1;
    return 0;
}
bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
    return std::min(a.x(), b.x()) - kTiny <= p.x() && p.x() <= std::max(a.x(), b.x()) + kTiny &&
           std::min(a.y(), b.y()) - kTiny <= p.y() && p.y() <= std::max(a.y(), b.y()) + kTiny;
}
}  // namespace

bool segments_intersect(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
    const int o1 = orient(a, b, c), o2 = orient(a, b, d);
    const int o3 = orient(c, d, a), o4 = orient(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

namespace {

double curve_pair_distance(const ClosedCurve& a, const ClosedCurve& b, bool& intersect) {
    // Exact for two tagged circles, otherwise edge-to-edge minimum.
    if (a.circle_center && b.circle_center) {
        const double d = (*a.circle_center - *b.circle_center).norm();
        const double gap = std::abs(d - b.circle_radius) - a.circle_radius;
        if (gap <= 0.0) intersect = true;
        return std::max(0.0, gap);
    }
    const int na = static_cast<int>(a.points.size());
    const int nb = static_cast<int>(b.points.size());
    double best = std::numeric_limits<double>::max();
    for (int i = 0; i < na; ++i) {
        const Vec2& p = a.points[i];
        const Vec2& q = a.points[next_index(i, na)];
        for (int j = 0; j < nb; ++j) {
            const Vec2& u = b.points[j];
            const Vec2& v = b.points[next_index(j, nb)];
            if (segments_intersect(p, q, u, v)) {
                intersect = true;
                return 0.0;
            }
            best = std::min({best, point_segment_distance(p, u, v), point_segment_distance(u, p, q)});
        }
    }
    return best;
}

}  // namespace

Clearance clearance(const DomainGeometry& domain, const ClosedCurve& placed_solid) {
    Clearance c;
    bool intersect = false;
    double d = std::numeric_limits<double>::max();

    // Inside-circle special case: gap to the outer wall from within.
    if (placed_solid.circle_center && domain.outer.circle_center) {
        const double centre_d = (*placed_solid.circle_center - *domain.outer.circle_center).norm();
        const double gap = domain.outer.circle_radius - centre_d - placed_solid.circle_radius;
        if (gap <= 0.0) intersect = true;
        d = std::max(0.0, gap);
    } else {
        d = curve_pair_distance(placed_solid, domain.outer, intersect);
        if (!intersect && !domain.outer.contains(placed_solid.points.front())) intersect = true;
    }
    for (const ClosedCurve& h : domain.holes) {
        if (intersect) break;
        bool hit = false;
        const double dh = curve_pair_distance(placed_solid, h, hit);
        if (hit || h.contains(placed_solid.points.front()) ||
            placed_solid.contains(h.points.front())) {
            intersect = true;
        }
        d = std::min(d, dh);
    }
    if (intersect) {
        c.distance = 0.0;
        c.collision = true;
    } else {
        c.distance = d;
    }
    return c;
}

}  // namespace bodyflow
