/// @file test_geometry.cpp
/// Curves, panelization, exact polygon mass properties and clearance.

#include <doctest.h>

#include <random>

#include "bodyflow/geometry.hpp"
#include "oracles.hpp"

using namespace bodyflow;

TEST_SUITE_BEGIN("geometry");

TEST_CASE("unit circle with four panels is the inscribed square") {
    const auto square = panelize(circle_curve(Vec2(0.0, 0.0), 1.0, 64), 4);
    CHECK(square.size() == 4);
    for (const Panel& p : square) CHECK(p.len == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("panelize rejects tiny panel counts") {
    CHECK_THROWS_AS(panelize(circle_curve(Vec2(0.0, 0.0), 1.0), 2), std::invalid_argument);
}

TEST_CASE("panelize rejects a self-intersecting curve") {
    ClosedCurve bow;
    bow.points = {Vec2(0, 0), Vec2(1, 1), Vec2(1, 0), Vec2(0, 1),
                  Vec2(-0.2, 0.8), Vec2(-0.4, 0.6), Vec2(-0.4, 0.2), Vec2(-0.2, 0.1)};
    CHECK_THROWS_AS(panelize(bow, 8), std::invalid_argument);
}

TEST_CASE("256 panels recover the circle perimeter to 1e-3") {
    const auto panels = panelize(circle_curve(Vec2(0.5, -0.25), 1.0, 4096), 256);
    double perim = 0.0;
    for (const Panel& p : panels) perim += p.len;
    CHECK(std::abs(perim - 2.0 * M_PI) < 1e-3);
}

TEST_CASE("ellipse perimeter matches the quadrature arc length to 1e-3") {
    const double a = 2.0, b = 1.0;
    const auto panels = panelize(ellipse_curve(Vec2(0.0, 0.0), a, b, 8192), 256);
    double perim = 0.0;
    for (const Panel& p : panels) perim += p.len;
    const double exact = oracles::adaptive_simpson(
        [&](double t) {
            return std::sqrt(a * a * std::sin(t) * std::sin(t) + b * b * std::cos(t) * std::cos(t));
        },
        0.0, 2.0 * M_PI, 1e-12);
    CHECK(std::abs(perim - exact) < 1e-3);
}

TEST_CASE("tangent orientation: circulation of the tangent field is the perimeter") {
    const auto sys = build_panels(disk_domain(2.0), nullptr, RigidMotion(), 128);
    for (const BoundaryLoop& loop : sys.loops) {
        double s = 0.0;
        for (const Panel& p : loop.panels) s += p.tangent.dot(p.tangent) * p.len;
        CHECK(s == doctest::Approx(loop.perimeter()));
    }
}

TEST_CASE("unit disk mass properties") {
    const MassProperties mp = mass_properties(circle_curve(Vec2(0.0, 0.0), 1.0, 4096), 1.0);
    CHECK(mp.mass == doctest::Approx(M_PI).epsilon(1e-5));
    CHECK(mp.inertia == doctest::Approx(M_PI / 2.0).epsilon(1e-5));
    CHECK(mp.centroid.norm() < 1e-12);
}

TEST_CASE("mass properties converge at second order in the sample count") {
    double prev_err = 0.0;
    for (int n : {64, 128, 256}) {
        const MassProperties mp = mass_properties(circle_curve(Vec2(0.0, 0.0), 1.0, n), 1.0);
        const double err = std::abs(mp.mass - M_PI);
        if (prev_err > 0.0) {
            const double ratio = prev_err / err;
            CHECK(ratio > 3.5);  // second order: ratio ~ 4
            CHECK(ratio < 4.5);
        }
        prev_err = err;
    }
}

TEST_CASE("zero density is rejected") {
    CHECK_THROWS_AS(mass_properties(circle_curve(Vec2(0.0, 0.0), 1.0), 0.0),
                    std::invalid_argument);
}

TEST_CASE("square side 2 mass and inertia") {
    ClosedCurve sq;
    sq.points = {Vec2(-1, -1), Vec2(1, -1), Vec2(1, 1), Vec2(-1, 1)};
    const MassProperties mp = mass_properties(sq, 1.0);
    CHECK(mp.mass == doctest::Approx(4.0));
    CHECK(mp.inertia == doctest::Approx(8.0 / 3.0));
}

TEST_CASE("solid construction recenters the centroid") {
    ClosedCurve sq;
    sq.points = {Vec2(0, 0), Vec2(2, 0), Vec2(2, 2), Vec2(0, 2)};
    const SolidShape s = make_solid(sq, 3.0, 32);
    CHECK(s.mass == doctest::Approx(12.0));
    CHECK(s.boundary.centroid().norm() < 1e-12);
}

TEST_CASE("clearance of concentric and offset disks") {
    const DomainGeometry dom = disk_domain(3.0);
    CHECK(clearance(dom, circle_curve(Vec2(0.0, 0.0), 1.0)).distance == doctest::Approx(2.0));
    CHECK(clearance(dom, circle_curve(Vec2(1.0, 0.0), 1.0)).distance == doctest::Approx(1.0));
    const Clearance hit = clearance(dom, circle_curve(Vec2(2.5, 0.0), 1.0));
    CHECK(hit.collision);
    CHECK(hit.distance == 0.0);
}

TEST_CASE("clearance is invariant under a rigid motion of the whole scene") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> val(-0.5, 0.5);
    for (int k = 0; k < 10; ++k) {
        const RigidMotion g(val(rng) * 2.0, Vec2(val(rng), val(rng)));
        DomainGeometry dom;
        dom.outer = ellipse_curve(Vec2(0.0, 0.0), 3.0, 2.0, 1024);
        const ClosedCurve body = circle_curve(Vec2(0.8, 0.2), 0.5, 512);
        const double before = clearance(dom, body).distance;
        DomainGeometry dom2;
        dom2.outer = dom.outer.transformed(g);
        const double after = clearance(dom2, body.transformed(g)).distance;
        CHECK(after == doctest::Approx(before).epsilon(1e-9));
    }
}

TEST_CASE("panel normals point out of the fluid") {
    const DomainGeometry dom = disk_domain(2.0);
    const SolidShape solid = disk_solid(0.5, 1.0, 64);
    const auto sys = build_panels(dom, &solid, RigidMotion(0.0, Vec2(0.5, 0.0)), 192);
    REQUIRE(sys.has_body);
    for (const Panel& p : sys.body().panels) {
        // Outward from the fluid = towards the body centre.
        CHECK(p.normal.dot(Vec2(0.5, 0.0) - p.mid) > 0.0);
    }
    for (const Panel& p : sys.outer().panels) {
        CHECK(p.normal.dot(p.mid) > 0.0);  // away from the origin
    }
}

TEST_SUITE_END();
