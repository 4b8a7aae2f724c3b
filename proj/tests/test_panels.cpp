/// @file test_panels.cpp
/// Straight-panel influence closed forms checked against adaptive quadrature
/// of the point kernels, plus the sheet jump relations.

#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "panel_kernels.hpp"

using namespace bodyflow;
namespace k = bodyflow::kernels;

namespace {

Panel make_panel(const Vec2& a, const Vec2& b) {
    Panel p;
    p.a = a;
    p.b = b;
    p.mid = 0.5 * (a + b);
    p.len = (b - a).norm();
    p.tangent = (b - a) / p.len;
    p.normal = -perp(p.tangent);
    return p;
}

Vec2 quad_vortex_sheet(const Panel& p, const Vec2& x) {
    auto ucomp = [&](int c) {
        return oracles::adaptive_simpson(
            [&](double s) {
                const Vec2 y = p.a + s * p.tangent;
                const Vec2 d = x - y;
                const Vec2 u = perp(d) / (2.0 * M_PI * d.squaredNorm());
                return c == 0 ? u.x() : u.y();
            },
            0.0, p.len, 1e-13);
    };
    return Vec2(ucomp(0), ucomp(1));
}

Vec2 quad_source_sheet(const Panel& p, const Vec2& x) {
    auto ucomp = [&](int c) {
        return oracles::adaptive_simpson(
            [&](double s) {
                const Vec2 y = p.a + s * p.tangent;
                const Vec2 d = x - y;
                const Vec2 u = d / (2.0 * M_PI * d.squaredNorm());
                return c == 0 ? u.x() : u.y();
            },
            0.0, p.len, 1e-13);
    };
    return Vec2(ucomp(0), ucomp(1));
}

}  // namespace

TEST_SUITE_BEGIN("panels");

TEST_CASE("vortex sheet velocity matches quadrature off the panel") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Panel p = make_panel(Vec2(val(rng), val(rng)), Vec2(val(rng) + 1.5, val(rng)));
        const Vec2 x(val(rng) * 3.0, val(rng) * 3.0 + 1.2);
        if (point_segment_distance(x, p.a, p.b) < 0.05) continue;
        const Vec2 closed = k::vortex_sheet_velocity(p, x);
        const Vec2 quad = quad_vortex_sheet(p, x);
        CHECK((closed - quad).norm() < 1e-10);
    }
}

TEST_CASE("source sheet velocity matches quadrature off the panel") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const Panel p = make_panel(Vec2(val(rng), val(rng)), Vec2(val(rng), val(rng) + 1.2));
        const Vec2 x(val(rng) * 2.0 + 1.4, val(rng) * 2.0);
        if (point_segment_distance(x, p.a, p.b) < 0.05) continue;
        const Vec2 closed = k::source_sheet_velocity(p, x);
        const Vec2 quad = quad_source_sheet(p, x);
        CHECK((closed - quad).norm() < 1e-10);
    }
}

TEST_CASE("log potential matches quadrature, including on the panel") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    const Panel p = make_panel(Vec2(-0.4, 0.1), Vec2(0.7, 0.3));
    for (int trial = 0; trial < 10; ++trial) {
        const Vec2 x(val(rng) * 2.0, val(rng) * 2.0);
        const double closed = k::source_sheet_potential(p, x);
        const double quad = oracles::adaptive_simpson(
            [&](double s) {
                const Vec2 y = p.a + s * p.tangent;
                return std::log(std::max((x - y).norm(), 1e-300)) / (2.0 * M_PI);
            },
            0.0, p.len, 1e-13);
        CHECK(closed == doctest::Approx(quad).epsilon(1e-9));
    }
    // Finite on the panel midpoint.
    CHECK(std::isfinite(k::source_sheet_potential(p, p.mid)));
}

TEST_CASE("sheet jumps: tangential for vortex sheets, normal for source sheets") {
    const Panel p = make_panel(Vec2(-0.5, 0.0), Vec2(0.5, 0.0));
    const double eps = 1e-7;
    // Fluid side is +perp(tangent).
    const Vec2 above = p.mid + eps * perp(p.tangent);
    const Vec2 below = p.mid - eps * perp(p.tangent);
    const Vec2 vs_above = k::vortex_sheet_velocity(p, above);
    const Vec2 vs_below = k::vortex_sheet_velocity(p, below);
    CHECK(vs_above.dot(p.tangent) == doctest::Approx(-0.5).epsilon(1e-5));
    CHECK(vs_below.dot(p.tangent) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(std::abs(vs_above.dot(p.normal)) < 1e-5);

    const Vec2 ss_above = k::source_sheet_velocity(p, above);
    const Vec2 ss_below = k::source_sheet_velocity(p, below);
    CHECK(ss_above.dot(perp(p.tangent)) == doctest::Approx(0.5).epsilon(1e-5));
    CHECK(ss_below.dot(perp(p.tangent)) == doctest::Approx(-0.5).epsilon(1e-5));
}

TEST_CASE("gradients match central differences") {
    const Panel p = make_panel(Vec2(-0.3, -0.2), Vec2(0.6, 0.4));
    const Vec2 x(0.9, 0.7);
    const double fd = 1e-6;
    auto check_grad = [&](auto vel, const Mat2& j) {
        const Vec2 dx(fd, 0.0), dy(0.0, fd);
        const Vec2 gx = (vel(x + dx) - vel(x - dx)) / (2.0 * fd);
        const Vec2 gy = (vel(x + dy) - vel(x - dy)) / (2.0 * fd);
        CHECK(std::abs(j(0, 0) - gx.x()) < 1e-7);
        CHECK(std::abs(j(1, 0) - gx.y()) < 1e-7);
        CHECK(std::abs(j(0, 1) - gy.x()) < 1e-7);
        CHECK(std::abs(j(1, 1) - gy.y()) < 1e-7);
    };
    check_grad([&](const Vec2& y) { return k::vortex_sheet_velocity(p, y); },
               k::vortex_sheet_gradient(p, x));
    check_grad([&](const Vec2& y) { return k::source_sheet_velocity(p, y); },
               k::source_sheet_gradient(p, x));
    check_grad([&](const Vec2& y) { return k::point_vortex_velocity(Vec2(0.1, 0.2), 0.7, y); },
               k::point_vortex_gradient(Vec2(0.1, 0.2), 0.7, x));
    check_grad([&](const Vec2& y) { return k::point_source_velocity(Vec2(0.1, 0.2), 0.7, y); },
               k::point_source_gradient(Vec2(0.1, 0.2), 0.7, x));
}

TEST_CASE("far field of a panel is its total point strength") {
    const Panel p = make_panel(Vec2(-0.5, 0.0), Vec2(0.5, 0.0));
    const Vec2 x(40.0, 25.0);
    const Vec2 vs = k::vortex_sheet_velocity(p, x);
    const Vec2 pv = k::point_vortex_velocity(p.mid, p.len, x);
    CHECK((vs - pv).norm() < 1e-5 * pv.norm());
}

TEST_SUITE_END();
