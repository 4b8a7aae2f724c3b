/// @file test_potential_flow.cpp
/// Elliptic solves on the fluid region: boundary conditions, circulation
/// constraints, analytic annulus and dipole references, the added-mass
/// matrix against the classical disk value and an independent volume
/// quadrature, and the q-growth probe of the velocity gradient norms.

#include <doctest.h>

#include <memory>
#include <random>

#include "bodyflow/potential_flow.hpp"
#include "bodyflow/quadrature.hpp"
#include "oracles.hpp"

using namespace bodyflow;

namespace {

std::shared_ptr<const PanelSystem> annulus_panels(double a, double b, int total,
                                                  SolidShape* out_solid = nullptr) {
    DomainGeometry dom = disk_domain(b);
    SolidShape solid = disk_solid(a, 1.0, total / 2);
    if (out_solid) *out_solid = solid;
    return std::make_shared<PanelSystem>(build_panels(dom, &solid, RigidMotion(), total));
}

}  // namespace

TEST_SUITE_BEGIN("potential_flow");

TEST_CASE("null data produces the null field") {
    auto ps = annulus_panels(0.5, 3.0, 128);
    VorticityField w;
    const FlowSolution fs = solve_flow(w, RigidState{}, ps);
    CHECK(fs.max_bc_residual() < 1e-10);
    for (const Vec2& x : {Vec2(1.2, 0.3), Vec2(-2.0, 0.7), Vec2(0.0, -1.5)}) {
        CHECK(fs.velocity(x).norm() < 1e-10);
    }
    for (std::size_t q = 0; q < ps->body().panels.size(); ++q) {
        CHECK(std::abs(fs.sheet_strength(0, static_cast<int>(q))) < 1e-9);
    }
}

TEST_CASE("annulus circulation field matches x^perp / (2 pi |x|^2)") {
    auto ps = annulus_panels(1.0, 2.5, 384);
    VorticityField w;
    w.gamma_body = 1.0;
    const FlowSolution fs = solve_flow(w, RigidState{}, ps);
    CHECK(fs.max_bc_residual() < 1e-8);
    for (const Vec2& x : {Vec2(1.5, 0.0), Vec2(0.0, 1.8), Vec2(-1.2, 1.0), Vec2(1.4, -1.4)}) {
        const Vec2 exact = perp(x) / (2.0 * M_PI * x.squaredNorm());
        CHECK((fs.velocity(x) - exact).norm() < 1e-4);
    }
    CHECK(fs.circulation(0) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("a rotating centred disk induces no flow") {
    auto ps = annulus_panels(0.8, 3.0, 256);
    VorticityField w;
    RigidState s;
    s.r = 2.0;
    const FlowSolution fs = solve_flow(w, s, ps);
    for (const Vec2& x : {Vec2(1.5, 0.4), Vec2(-2.2, 0.3)}) {
        CHECK(fs.velocity(x).norm() < 1e-9);
    }
}

TEST_CASE("boundary data is honored for a moving body with vorticity") {
    DomainGeometry dom = disk_domain(3.0);
    SolidShape solid = disk_solid(0.5, 2.0, 96);
    auto ps = std::make_shared<PanelSystem>(
        build_panels(dom, &solid, RigidMotion(0.2, Vec2(0.8, -0.4)), 288));
    VorticityField w;
    w.eps_blob = 0.08;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int k = 0; k < 40; ++k) {
        const Vec2 x(val(rng) * 1.2 - 1.5, val(rng) * 1.2 + 1.0);
        w.particles.push_back({x, 0.02 * val(rng)});
    }
    w.gamma_body = 0.3;
    RigidState s;
    s.h = Vec2(0.8, -0.4);
    s.theta = 0.2;
    s.l = Vec2(0.25, -0.1);
    s.r = 0.6;
    const FlowSolution fs = solve_flow(w, s, ps);
    CHECK(fs.max_bc_residual() < 1e-8);
    CHECK(fs.circulation(0) == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("two-hole domain: harmonic basis has unit circulations") {
    DomainGeometry dom = disk_domain(3.0);
    dom.holes.push_back(circle_curve(Vec2(-1.5, 0.9), 0.6, 1024));
    dom.holes.push_back(circle_curve(Vec2(1.4, -1.0), 0.5, 1024));
    SolidShape solid = disk_solid(0.4, 1.0, 64);
    auto ps = std::make_shared<PanelSystem>(
        build_panels(dom, &solid, RigidMotion(0.0, Vec2(0.0, 1.2)), 320));
    const auto fields = harmonic_fields(ps);
    REQUIRE(fields.size() == 3);
    for (int i = 0; i < 3; ++i) {
        CHECK(fields[i].max_bc_residual() < 1e-8);
        for (int j = 0; j < 3; ++j) {
            CHECK(fields[i].circulation(j) == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-6));
        }
    }
}

TEST_CASE("annulus harmonic field matches the analytic circulation flow") {
    auto ps = annulus_panels(1.0, 2.5, 384);
    const auto fields = harmonic_fields(ps);
    REQUIRE(fields.size() == 1);
    for (const Vec2& x : {Vec2(1.6, 0.2), Vec2(-0.3, 1.9)}) {
        const Vec2 exact = perp(x) / (2.0 * M_PI * x.squaredNorm());
        CHECK((fields[0].velocity(x) - exact).norm() < 1e-4);
    }
}

TEST_CASE("no cycles means an empty harmonic basis") {
    DomainGeometry dom = disk_domain(2.0);
    auto ps = std::make_shared<PanelSystem>(build_panels(dom, nullptr, RigidMotion(), 64));
    CHECK(harmonic_fields(ps).empty());
}

TEST_CASE("kirchhoff potentials: rotation potential of a disk vanishes") {
    auto ps = annulus_panels(0.6, 3.0, 256);
    const KirchhoffSet ks = solve_kirchhoff(RigidState{}, ps);
    for (std::size_t p = 0; p < ps->body().panels.size(); p += 7) {
        CHECK(std::abs(ks.body_potential(2, static_cast<int>(p))) < 1e-8);
        CHECK(ks.body_grad(2, static_cast<int>(p)).norm() < 1e-7);
    }
}

TEST_CASE("kirchhoff potential of a disk in a large domain is the dipole trace") {
    // Phi_1 on the body approaches -a cos(angle) as the walls recede; the
    // concentric-cylinder solution A(cos/r + r cos/R^2), A = -a^2/(1-(a/R)^2),
    // pins the finite-wall correction.
    const double a = 0.5, R = 5.0;
    DomainGeometry dom = disk_domain(R);
    SolidShape solid = disk_solid(a, 1.0, 128);
    auto ps = std::make_shared<PanelSystem>(build_panels(dom, &solid, RigidMotion(), 384));
    const KirchhoffSet ks = solve_kirchhoff(RigidState{}, ps);
    const double aa = -a * a / (1.0 - (a / R) * (a / R));
    for (std::size_t p = 0; p < ps->body().panels.size(); p += 5) {
        const Vec2 m = ps->body().panels[p].mid;
        const double angle = std::atan2(m.y(), m.x());
        const double bare = -a * std::cos(angle);
        const double walls = aa * std::cos(angle) * (1.0 / a + a / (R * R));
        CHECK(ks.body_potential(0, static_cast<int>(p)) ==
              doctest::Approx(bare).epsilon(0.03));  // the wall effect is ~2%
        CHECK(ks.body_potential(0, static_cast<int>(p)) ==
              doctest::Approx(walls).epsilon(0.005));
    }
    // Interior gradient close to the dipole-plus-uniform cylinder solution.
    for (const Vec2& x : {Vec2(1.2, 0.0), Vec2(0.9, 0.9)}) {
        const double r2 = x.squaredNorm();
        const Vec2 dipole = aa * (Vec2(1.0, 0.0) * r2 - 2.0 * x.x() * x) / (r2 * r2) +
                            aa / (R * R) * Vec2(1.0, 0.0);
        CHECK((ks.grad(0, x) - dipole).norm() < 0.01 * dipole.norm() + 2e-4);
    }
}

TEST_CASE("neumann data integrates to zero on the body") {
    auto ps = annulus_panels(0.7, 3.0, 192);
    RigidState s;
    const KirchhoffSet ks = solve_kirchhoff(s, ps);
    for (int i = 0; i < 3; ++i) {
        double sum = 0.0;
        for (std::size_t p = 0; p < ps->body().panels.size(); ++p) {
            sum += ks.neumann_data(i, static_cast<int>(p)) * ps->body().panels[p].len;
        }
        CHECK(std::abs(sum) < 1e-10);
    }
}

TEST_CASE("added mass of a disk approaches pi a^2 in translation, zero in rotation") {
    const double a = 0.5, R = 20.0 * a;
    DomainGeometry dom = disk_domain(R);
    SolidShape solid = disk_solid(a, 1.0, 160);
    auto ps = std::make_shared<PanelSystem>(build_panels(dom, &solid, RigidMotion(), 512));
    const KirchhoffSet ks = solve_kirchhoff(RigidState{}, ps);
    const AddedMass am = added_mass(ks, solid.mass, solid.inertia);
    const double exact = M_PI * a * a;
    CHECK(am.fluid(0, 0) == doctest::Approx(exact).epsilon(0.01));
    CHECK(am.fluid(1, 1) == doctest::Approx(exact).epsilon(0.01));
    // The concentric analytic value pins the wall effect tighter.
    const double confined = M_PI * a * a * (R * R + a * a) / (R * R - a * a);
    CHECK(am.fluid(0, 0) == doctest::Approx(confined).epsilon(0.01));
    CHECK(std::abs(am.fluid(2, 2)) < 1e-8);
    CHECK((am.fluid - am.fluid.transpose()).norm() < 1e-8 * am.fluid.norm());
    Eigen::SelfAdjointEigenSolver<Mat3> eig(am.fluid);
    CHECK(eig.eigenvalues().minCoeff() > -1e-8 * am.fluid.norm());
}

TEST_CASE("added mass boundary form agrees with the volume Gram integral") {
    const double a = 0.6;
    DomainGeometry dom = disk_domain(3.0);
    SolidShape solid = disk_solid(a, 1.0, 96);
    const RigidMotion place(0.0, Vec2(0.7, -0.3));
    auto ps = std::make_shared<PanelSystem>(build_panels(dom, &solid, place, 288));
    RigidState s;
    s.h = Vec2(0.7, -0.3);
    const KirchhoffSet ks = solve_kirchhoff(s, ps);
    const AddedMass am = added_mass(ks, solid.mass, solid.inertia);

    MaskedGrid grid = MaskedGrid::build(dom, 256, 8);
    const ClosedCurve placed = solid.boundary.transformed(place);
    grid.set_body(&placed);
    Mat3 vol = Mat3::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = i; j < 3; ++j) {
            vol(i, j) = vol(j, i) = grid.integrate(
                [&](const Vec2& x) { return ks.grad(i, x).dot(ks.grad(j, x)); });
        }
    }
    CHECK((vol - am.fluid).norm() < 0.02 * am.fluid.norm() + 1e-4);
}

TEST_CASE("discrete gradient norms grow at most linearly in the exponent") {
    // Fixed data, a family of exponents; the scaled norms must not grow.
    auto ps = annulus_panels(0.6, 3.0, 192, nullptr);
    VorticityField w;
    w.eps_blob = 0.1;
    w.particles.push_back({Vec2(1.6, 0.3), 0.4});
    w.particles.push_back({Vec2(-1.2, -0.9), -0.25});
    w.gamma_body = 0.2;
    RigidState s;
    s.l = Vec2(0.1, 0.05);
    const FlowSolution fs = solve_flow(w, s, ps);

    MaskedGrid grid = MaskedGrid::build(disk_domain(3.0), 128, 4);
    const ClosedCurve placed = circle_curve(Vec2(0.0, 0.0), 0.6);
    grid.set_body(&placed);
    double prev_ratio = 1e300;
    for (double q : {2.0, 4.0, 8.0, 16.0}) {
        const double wq = grid.integrate([&](const Vec2& x) {
            const double g = fs.velocity_gradient(x).norm();
            const double u = fs.velocity(x).norm();
            return std::pow(u, q) + std::pow(g, q);
        });
        const double norm_q = std::pow(wq, 1.0 / q);
        const double ratio = norm_q / q;
        CHECK(ratio < prev_ratio * 1.05);
        prev_ratio = ratio;
    }
}

TEST_SUITE_END();
