#include "bodyflow/diffeo.hpp"

#include <cmath>
#include <stdexcept>

namespace bodyflow {

namespace {

// C^2 smoothstep: 1 below delta, 0 above 2*delta in the distance argument.
double cutoff(double d, double delta) {
    if (d <= delta) return 1.0;
    if (d >= 2.0 * delta) return 0.0;
    const double s = (d - delta) / delta;
    return 1.0 - s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
}

}  // namespace

DiffeoMap::DiffeoMap(const RigidMotion& tau, const DomainGeometry& domain,
                     ClosedCurve body_reference, DiffeoParams params)
    : tau_(tau), xi_(se2_log(tau)), body_ref_(std::move(body_reference)), params_(params) {
    if (params_.delta <= 0.0) {
        params_.delta = clearance(domain, body_ref_).distance / 3.0;
    }
    if (params_.delta <= 0.0) throw std::domain_error("diffeo: zero cutoff width");
}

Vec2 DiffeoMap::generating_field(double t, const Vec2& x) const {
    const Vec2 tl = t * xi_.l;
    // Distance to the screw-moved solid, evaluated in the reference frame.
    const RigidMotion tau_t = se2_screw(xi_, t);
    const Vec2 xb = rotation_matrix(-tau_t.angle()) * (x - tau_t.translation());
    const double sd = body_ref_.signed_distance(xb);
    const double d = std::max(sd, 0.0);
    const double delta = params_.delta;
    if (d >= 2.0 * delta) return Vec2(0.0, 0.0);

    const Vec2 rigid = xi_.l + xi_.r * perp(x - tl);
    if (d <= delta) return rigid;

    const double phi = cutoff(d, delta);
    // Stream function of the rigid field, S = x^perp . l + r |x - t l|^2 / 2,
    // so V = phi * rigid + S * perp(grad phi) stays divergence free.
    const double s_val = perp(x).dot(xi_.l) + 0.5 * xi_.r * (x - tl).squaredNorm();
    const double u = (d - delta) / delta;
    const double dphi = -(30.0 * u * u * (1.0 - u) * (1.0 - u)) / delta;
    // Gradient of the distance: outward direction from the moved solid.
    Vec2 grad_d;
    if (body_ref_.circle_center) {
        const Vec2 c = *body_ref_.circle_center;
        grad_d = (xb - c).normalized();
    } else {
        // Nearest-point direction on the reference polygon.
        const int n = static_cast<int>(body_ref_.points.size());
        double best = 1e300;
        Vec2 nearest(0.0, 0.0);
        for (int i = 0; i < n; ++i) {
            const Vec2& a = body_ref_.points[i];
            const Vec2& b = body_ref_.points[(i + 1) % n];
            const Vec2 ab = b - a;
            const double tt = std::clamp((xb - a).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
            const Vec2 p = a + tt * ab;
            const double dd = (xb - p).squaredNorm();
            if (dd < best) {
                best = dd;
                nearest = p;
            }
        }
        grad_d = (xb - nearest).normalized();
    }
    grad_d = rotation_matrix(tau_t.angle()) * grad_d;  // back to world frame
    return phi * rigid + s_val * dphi * perp(grad_d);
}

Mat2 DiffeoMap::field_gradient(double t, const Vec2& x) const {
    // Central differences of the generating field; the field itself is
    // analytic in the band, the distance direction comes from a polygon
    // query, so differencing the field is the robust route.
    const double fd = 1e-6 * params_.delta;
    Mat2 g;
    const Vec2 dx(fd, 0.0), dy(0.0, fd);
    const Vec2 gx = (generating_field(t, x + dx) - generating_field(t, x - dx)) / (2.0 * fd);
    const Vec2 gy = (generating_field(t, x + dy) - generating_field(t, x - dy)) / (2.0 * fd);
    g << gx.x(), gy.x(), gx.y(), gy.y();
    return g;
}

void DiffeoMap::flow(const Vec2& x0, bool reverse, bool with_jacobian, Vec2& y, Mat2& j) const {
    const int n = params_.substeps;
    const double dt = (reverse ? -1.0 : 1.0) / n;
    double t = reverse ? 1.0 : 0.0;
    y = x0;
    j = Mat2::Identity();
    for (int k = 0; k < n; ++k) {
        const Vec2 k1 = generating_field(t, y);
        const Vec2 k2 = generating_field(t + 0.5 * dt, y + 0.5 * dt * k1);
        const Vec2 k3 = generating_field(t + 0.5 * dt, y + 0.5 * dt * k2);
        const Vec2 k4 = generating_field(t + dt, y + dt * k3);
        if (with_jacobian) {
            const Mat2 a1 = field_gradient(t, y);
            const Mat2 a2 = field_gradient(t + 0.5 * dt, y + 0.5 * dt * k1);
            const Mat2 a3 = field_gradient(t + 0.5 * dt, y + 0.5 * dt * k2);
            const Mat2 a4 = field_gradient(t + dt, y + dt * k3);
            const Mat2 j1 = a1 * j;
            const Mat2 j2 = a2 * (j + 0.5 * dt * j1);
            const Mat2 j3 = a3 * (j + 0.5 * dt * j2);
            const Mat2 j4 = a4 * (j + dt * j3);
            j += dt / 6.0 * (j1 + 2.0 * j2 + 2.0 * j3 + j4);
        }
        y += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        t += dt;
    }
}

Vec2 DiffeoMap::forward(const Vec2& x) const {
    Vec2 y;
    Mat2 j;
    flow(x, false, false, y, j);
    return y;
}

Vec2 DiffeoMap::inverse(const Vec2& x) const {
    Vec2 y;
    Mat2 j;
    flow(x, true, false, y, j);
    return y;
}

Mat2 DiffeoMap::jacobian(const Vec2& x) const {
    Vec2 y;
    Mat2 j;
    flow(x, false, true, y, j);
    return j;
}

void DiffeoMap::forward_with_jacobian(const Vec2& x, Vec2& y, Mat2& j) const {
    flow(x, false, true, y, j);
}

void DiffeoMap::inverse_with_jacobian(const Vec2& x, Vec2& y, Mat2& j) const {
    flow(x, true, true, y, j);
}

DiffeoMap build_psi(const RigidMotion& tau, const DomainGeometry& domain,
                    const ClosedCurve& body_reference, DiffeoParams params) {
    DiffeoMap map(tau, domain, body_reference, params);
    // Admissibility: the screw path must keep three cutoff widths of wall
    // clearance, so the cutoff band never touches the wall neighborhood.
    const Twist xi = se2_log(tau);
    const int samples = 17;
    for (int k = 0; k <= samples; ++k) {
        const RigidMotion tau_t = se2_screw(xi, static_cast<double>(k) / samples);
        const Clearance c = clearance(domain, body_reference.transformed(tau_t));
        if (c.collision || c.distance < 3.0 * map.delta() - 1e-12) {
            throw std::domain_error("build_psi: motion leaves the admissible neighborhood");
        }
    }
    return map;
}

void CompareMap::forward_with_jacobian(const Vec2& x, Vec2& y, Mat2& j) const {
    Vec2 mid;
    Mat2 j_inv;
    psi1_.inverse_with_jacobian(x, mid, j_inv);
    Mat2 j_fwd;
    psi2_.forward_with_jacobian(mid, y, j_fwd);
    j = j_fwd * j_inv;
}

CompareMap compare_maps(const RigidMotion& tau1, const RigidMotion& tau2,
                        const DomainGeometry& domain, const ClosedCurve& body_reference,
                        DiffeoParams params) {
    DiffeoMap psi1 = build_psi(tau1, domain, body_reference, params);
    DiffeoMap psi2 = build_psi(tau2, domain, body_reference, params);
    return CompareMap(std::move(psi1), std::move(psi2));
}

VelocityEvaluator pullback_velocity(VelocityEvaluator u, std::shared_ptr<const CompareMap> phi) {
    return [u = std::move(u), phi = std::move(phi)](const Vec2& x) -> Vec2 {
        Vec2 y;
        Mat2 j;
        phi->forward_with_jacobian(x, y, j);
        const double det = j.determinant();
        if (std::abs(det - 1.0) > 1e-3) {
            throw std::runtime_error("pullback_velocity: Jacobian determinant off unity");
        }
        return j.inverse() * u(y);
    };
}

}  // namespace bodyflow
