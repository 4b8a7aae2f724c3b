// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0
//
// Closed-form influence of straight constant-strength panels, written with
// the conjugate velocity W(z) = u - i v. A unit point vortex has
// W = -i/(2 pi (z - z0)), a unit point source W = 1/(2 pi (z - z0)); panels
// integrate these along the segment. Principal values at the own midpoint
// vanish because the kernels are odd there; the one-sided sheet jumps are
// added by the callers.

#pragma once

#include <complex>

#include "bodyflow/geometry.hpp"

namespace bodyflow::kernels {

using Cplx = std::complex<double>;

inline Cplx to_cplx(const Vec2& v) { return Cplx(v.x(), v.y()); }
inline Vec2 vel_from_w(const Cplx& w) { return Vec2(w.real(), -w.imag()); }

/// Jacobian of (u,v) from the holomorphic derivative dW/dz.
inline Mat2 jac_from_dw(const Cplx& dw) {
    Mat2 j;
    j << dw.real(), -dw.imag(), -dw.imag(), -dw.real();
    return j;
}

inline bool at_midpoint(const Panel& p, const Vec2& x) {
    return (x - p.mid).squaredNorm() < 1e-24 * p.len * p.len;
}

/// log((z-z1)/(z-z2)) with the cut along the segment.
inline Cplx panel_log(const Panel& p, const Vec2& x) {
    const Cplx z = to_cplx(x);
    return std::log((z - to_cplx(p.a)) / (z - to_cplx(p.b)));
}

inline Cplx panel_pole_diff(const Panel& p, const Vec2& x) {
    const Cplx z = to_cplx(x);
    return 1.0 / (z - to_cplx(p.a)) - 1.0 / (z - to_cplx(p.b));
}

/// Velocity of a unit-strength vortex sheet on panel p (principal value at
/// the own midpoint).
inline Vec2 vortex_sheet_velocity(const Panel& p, const Vec2& x) {
    if (at_midpoint(p, x)) return Vec2(0.0, 0.0);
    const Cplx e = to_cplx(p.tangent);
    const Cplx w = (Cplx(0.0, -1.0) / (2.0 * M_PI * e)) * panel_log(p, x);
    return vel_from_w(w);
}

inline Mat2 vortex_sheet_gradient(const Panel& p, const Vec2& x) {
    const Cplx e = to_cplx(p.tangent);
    const Cplx dw = (Cplx(0.0, -1.0) / (2.0 * M_PI * e)) * panel_pole_diff(p, x);
    return jac_from_dw(dw);
}

/// Velocity of a unit-strength source sheet on panel p (principal value at
/// the own midpoint).
inline Vec2 source_sheet_velocity(const Panel& p, const Vec2& x) {
    if (at_midpoint(p, x)) return Vec2(0.0, 0.0);
    const Cplx e = to_cplx(p.tangent);
    const Cplx w = panel_log(p, x) / (2.0 * M_PI * e);
    return vel_from_w(w);
}

/// Same, collapsing to the midpoint monopole beyond eight panel lengths
/// (relative error under (len/d)^2 / 24); meant for volume quadrature.
inline Vec2 source_sheet_velocity_fast(const Panel& p, const Vec2& x) {
    const Vec2 d = x - p.mid;
    const double d2 = d.squaredNorm();
    if (d2 > 64.0 * p.len * p.len) {
        return p.len / (2.0 * M_PI) * d / d2;
    }
    return source_sheet_velocity(p, x);
}

inline Mat2 source_sheet_gradient(const Panel& p, const Vec2& x) {
    const Cplx e = to_cplx(p.tangent);
    const Cplx dw = panel_pole_diff(p, x) / (2.0 * M_PI * e);
    return jac_from_dw(dw);
}

/// Single-layer log potential: (1/2pi) int_panel ln|x - y| ds(y).
/// Finite on the panel itself (integrable singularity).
inline double source_sheet_potential(const Panel& p, const Vec2& x) {
    // Local coordinates: xi along the tangent, eta along perp(tangent).
    const Vec2 d = x - p.a;
    const double xi = d.dot(p.tangent);
    const double eta = d.dot(perp(p.tangent));
    auto antideriv = [&](double t) {  // t = xi - s
        const double r2 = t * t + eta * eta;
        double v = 0.0;
        if (r2 > 1e-300) v = -t * (0.5 * std::log(r2) - 1.0);
        if (eta != 0.0) v -= eta * std::atan(t / eta);
        return v;
    };
    return (antideriv(xi - p.len) - antideriv(xi)) / (2.0 * M_PI);
}

inline Vec2 point_vortex_velocity(const Vec2& z0, double strength, const Vec2& x) {
    const Vec2 d = x - z0;
    return strength / (2.0 * M_PI) * perp(d) / d.squaredNorm();
}

inline Mat2 point_vortex_gradient(const Vec2& z0, double strength, const Vec2& x) {
    const Cplx dz = to_cplx(x) - to_cplx(z0);
    const Cplx dw = Cplx(0.0, 1.0) * strength / (2.0 * M_PI * dz * dz);
    return jac_from_dw(dw);
}

inline Vec2 point_source_velocity(const Vec2& z0, double strength, const Vec2& x) {
    const Vec2 d = x - z0;
    return strength / (2.0 * M_PI) * d / d.squaredNorm();
}

inline Mat2 point_source_gradient(const Vec2& z0, double strength, const Vec2& x) {
    const Cplx dz = to_cplx(x) - to_cplx(z0);
    const Cplx dw = -strength / (2.0 * M_PI * dz * dz);
    return jac_from_dw(dw);
}

}  // namespace bodyflow::kernels
