/// @file test_euler.cpp
/// Coupled vortex-particle/rigid-body stepping: equilibrium exactness, the
/// momentum-balance oracle for the solid acceleration, conservation checks,
/// the frozen-solid orbit convergence order and reversibility.

#include <doctest.h>

#include <cmath>

#include "bodyflow/euler_sim.hpp"
#include "bodyflow/quadrature.hpp"
#include "oracles.hpp"

using namespace bodyflow;

namespace {

EulerParams quick_params(int panels, double t_end) {
    EulerParams p;
    p.total_panels = panels;
    p.t_end = t_end;
    p.quad_resolution = 96;
    p.quad_subsamples = 6;
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("euler");

TEST_CASE("rest state has zero acceleration") {
    DomainGeometry dom = disk_domain(3.0);
    SolidShape solid = disk_solid(0.6, 2.0, 48);
    VorticityField w;
    EulerSim sim(dom, solid, RigidState{}, w, quick_params(144, 1.0));
    const Vec3 acc = sim.solid_rhs();
    CHECK(acc.norm() < 1e-10);
}

TEST_CASE("spinning centred disk is an exact equilibrium") {
    DomainGeometry dom = disk_domain(3.0);
    SolidShape solid = disk_solid(0.6, 2.0, 48);
    RigidState s0;
    s0.r = 0.7;
    VorticityField w;
    EulerSim sim(dom, solid, s0, w, quick_params(144, 1.0));
    CHECK(sim.solid_rhs().norm() < 1e-10);
    const double dt = 0.05;
    for (int k = 0; k < 20; ++k) sim.step(dt);
    const RigidState& s = sim.state().solid;
    CHECK(s.h.norm() < 1e-10);
    CHECK(s.l.norm() < 1e-10);
    CHECK(std::abs(s.r - 0.7) < 1e-10);
    CHECK(std::abs(s.theta - 0.7 * 20 * dt) < 1e-10);
}

TEST_CASE("solid acceleration matches the momentum-balance oracle") {
    // Independent route: with the body velocity frozen, the rate of change of
    // the fluid Kirchhoff impulse I_i = int u . grad Phi_i picks up every
    // force term except the added-mass reaction, so
    //   M (l,r)' = -dI/dt|frozen + int u.((u.grad) grad Phi_i)
    //              + int u . d/dt(grad Phi_i).
    // All pieces come from direct quadrature and centered differencing of two
    // independent flow solves along the frozen motion.
    DomainGeometry dom = disk_domain(3.0);
    SolidShape solid = disk_solid(0.5, 2.0, 96);
    RigidState s0;
    s0.h = Vec2(0.9, 0.0);
    s0.l = Vec2(0.15, -0.05);
    s0.r = 0.25;
    VorticityField w;
    w.eps_blob = 0.1;
    w.particles.push_back({Vec2(-1.0, 0.3), 0.8});
    EulerSim sim(dom, solid, s0, w, quick_params(256, 1.0));

    const Vec3 acc = sim.solid_rhs();
    const Vec3 lhs = sim.state().am->total * acc;

    const double dt = 5e-4;
    auto frozen_state = [&](double step) {
        RigidState s = s0;
        s.h += step * s0.l;
        s.theta += step * s0.r;
        VorticityField wf = w;
        for (VortexParticle& p : wf.particles) {
            const FlowSolution& f = *sim.state().flow;
            const Vec2 k1 = f.velocity(p.x);
            const Vec2 k2 = f.velocity(p.x + 0.5 * step * k1);
            const Vec2 k3 = f.velocity(p.x + 0.5 * step * k2);
            const Vec2 k4 = f.velocity(p.x + step * k3);
            p.x += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        }
        return sim.rebuild(step, s, wf);
    };
    const EulerState plus = frozen_state(dt);
    const EulerState minus = frozen_state(-dt);

    // The impulse reduces to a body integral (div u = 0, u.n = 0 on walls):
    // I_i = contour integral of Phi_i (u_S . n) over the moving body, taken
    // here with an independent 1024-point rule on the analytic circle.
    auto impulse = [&](const EulerState& st, int i) {
        const Vec2 c = st.solid.h;
        double acc_i = 0.0;
        const int nq = 1024;
        for (int k = 0; k < nq; ++k) {
            const double a = 2.0 * M_PI * (k + 0.5) / nq;
            const Vec2 nrm(std::cos(a), std::sin(a));  // out of the body here
            const Vec2 x = c + 0.5 * nrm;
            const double us_n = -solid_velocity(st.solid, x).dot(nrm);  // fluid-out normal
            acc_i += st.kirchhoff->potential(i, x) * us_n * (0.5 * 2.0 * M_PI / nq);
        }
        return acc_i;
    };

    MaskedGrid grid = MaskedGrid::build(dom, 160, 8);
    ClosedCurve placed = solid.boundary.transformed(placement(s0, Vec2(0.0, 0.0)));
    grid.set_body(&placed);
    Vec3 rhs;
    for (int i = 0; i < 3; ++i) {
        const double di_dt = (impulse(plus, i) - impulse(minus, i)) / (2.0 * dt);
        const double vol = grid.integrate([&](const Vec2& x) {
            const Vec2 u = sim.state().flow->velocity(x);
            const double speed = u.norm();
            if (speed < 1e-14) return 0.0;
            const Vec2 dir = u / speed;
            const double fd = 1e-5;
            const Vec2 dg = (sim.state().kirchhoff->grad(i, x + fd * dir) -
                             sim.state().kirchhoff->grad(i, x)) /
                            fd * speed;
            return u.dot(dg);
        });
        const double phi_rate = grid.integrate([&](const Vec2& x) {
            return sim.state().flow->velocity(x).dot(
                (plus.kirchhoff->grad(i, x) - minus.kirchhoff->grad(i, x)) / (2.0 * dt));
        });
        rhs(i) = -di_dt + vol + phi_rate;
    }
    const double scale = std::max(lhs.norm(), rhs.norm());
    CHECK((lhs - rhs).norm() < 0.02 * scale);
}

TEST_CASE("frozen-solid particle orbit: constant radius at fourth order") {
    DomainGeometry dom = disk_domain(3.0);
    SolidShape solid = disk_solid(0.5, 1e10, 64);  // effectively immovable
    VorticityField w;
    w.eps_blob = 0.1;
    w.particles.push_back({Vec2(1.5, 0.0), 6.0});
    auto run_drift = [&](double dt, double* swept) {
        EulerSim sim(dom, solid, RigidState{}, w, quick_params(160, 1.0));
        const double r0 = sim.state().vorticity.particles[0].x.norm();
        const int steps = static_cast<int>(std::lround(1.6 / dt));
        for (int k = 0; k < steps; ++k) sim.step(dt);
        const Vec2 x = sim.state().vorticity.particles[0].x;
        if (swept) *swept = std::abs(std::atan2(x.y(), x.x()));
        return std::abs(x.norm() - r0);
    };
    double swept = 0.0;
    const double d1 = run_drift(0.2, nullptr);
    const double d2 = run_drift(0.1, &swept);
    CHECK(swept > 1e-3);          // the particle actually orbits
    CHECK(d1 / d2 > 8.0);         // fourth-order stepping: ratio ~ 16
    CHECK(d2 * (2.0 * M_PI / swept) < 1e-4);  // per-revolution drift budget
}

TEST_CASE("circulations and strengths are conserved along a run") {
    DomainGeometry dom = disk_domain(3.0);
    SolidShape solid = disk_solid(0.5, 1.5, 64);
    RigidState s0;
    s0.h = Vec2(0.6, -0.2);
    s0.l = Vec2(0.1, 0.05);
    VorticityField w;
    w.eps_blob = 0.12;
    w.gamma_body = 0.4;
    for (int k = 0; k < 24; ++k) {
        const double a = 2.0 * M_PI * k / 24.0;
        w.particles.push_back({Vec2(-1.2 + 0.3 * std::cos(a), 0.8 + 0.3 * std::sin(a)),
                               0.02 * (k % 2 ? 1.0 : -1.0)});
    }
    std::vector<double> strengths0;
    for (const auto& p : w.particles) strengths0.push_back(p.strength);
    EulerSim sim(dom, solid, s0, w, quick_params(160, 1.0));
    for (int k = 0; k < 8; ++k) {
        sim.step(0.03);
        CHECK(std::abs(sim.state().flow->circulation(0) - 0.4) < 1e-6);
        for (std::size_t i = 0; i < strengths0.size(); ++i) {
            // Bitwise: transport never touches the strengths.
            CHECK(sim.state().vorticity.particles[i].strength == strengths0[i]);
        }
    }
}

TEST_CASE("energy stays on budget over a short pair run") {
    DomainGeometry dom = disk_domain(3.0);
    SolidShape solid = disk_solid(0.4, 2.0, 64);
    RigidState s0;
    s0.h = Vec2(0.9, 0.0);
    VorticityField w;
    w.eps_blob = 0.12;
    for (int iy = 0; iy < 10; ++iy) {
        for (int ix = 0; ix < 15; ++ix) {
            const Vec2 x(-1.3 + 0.45 * (ix / 15.0 - 0.5), 0.28 + 0.45 * (iy / 10.0 - 0.5));
            const double amp = std::exp(-(x - Vec2(-1.3, 0.28)).squaredNorm() / 0.045);
            if (amp < 1e-3) continue;
            w.particles.push_back({x, 0.004 * amp});
            w.particles.push_back({Vec2(x.x(), -x.y()), -0.004 * amp});
        }
    }
    EulerSim sim(dom, solid, s0, w, quick_params(160, 0.25));
    const double e0 = sim.energy();
    sim.run();
    const double e1 = sim.energy();
    CHECK(std::abs(e1 - e0) / e0 < 5e-3);
}

TEST_CASE("a run is reversible") {
    DomainGeometry dom = disk_domain(3.0);
    SolidShape solid = disk_solid(0.5, 2.0, 64);
    RigidState s0;
    s0.h = Vec2(0.7, 0.1);
    s0.l = Vec2(0.05, 0.0);
    VorticityField w;
    w.eps_blob = 0.12;
    w.particles.push_back({Vec2(-1.1, 0.4), 0.5});
    w.particles.push_back({Vec2(-1.1, -0.2), -0.5});
    EulerSim sim(dom, solid, s0, w, quick_params(160, 1.0));
    const std::vector<VortexParticle> parts0 = sim.state().vorticity.particles;
    const int n = 10;
    const double dt = 0.02;
    for (int k = 0; k < n; ++k) sim.step(dt);
    sim.negate_motion();
    for (int k = 0; k < n; ++k) sim.step(dt);
    sim.negate_motion();
    const RigidState& s = sim.state().solid;
    CHECK((s.h - s0.h).norm() < 1e-6);
    CHECK(std::abs(s.theta) < 1e-6);
    CHECK((s.l - s0.l).norm() < 1e-6);
    for (std::size_t i = 0; i < parts0.size(); ++i) {
        CHECK((sim.state().vorticity.particles[i].x - parts0[i].x).norm() < 1e-6);
    }
}

TEST_CASE("a wall-bound solid ends with a collision status") {
    DomainGeometry dom = disk_domain(2.0);
    SolidShape solid = disk_solid(0.5, 8.0, 48);
    RigidState s0;
    s0.h = Vec2(0.6, 0.0);
    s0.l = Vec2(1.5, 0.0);
    VorticityField w;
    EulerParams p = quick_params(128, 3.0);
    p.dt = 0.02;
    EulerSim sim(dom, solid, s0, w, p);
    const EulerRunResult res = sim.run();
    CHECK(res.status == RunStatus::Collision);
    const auto& rows = res.monitors;
    REQUIRE(rows.size() >= 3);
    for (std::size_t i = rows.size() - 3; i + 1 < rows.size(); ++i) {
        CHECK(rows[i + 1].clearance < rows[i].clearance);
    }
}

TEST_CASE("particles inside the solid are rejected at start") {
    DomainGeometry dom = disk_domain(3.0);
    SolidShape solid = disk_solid(0.5, 2.0, 48);
    VorticityField w;
    w.particles.push_back({Vec2(0.1, 0.0), 0.5});  // inside the body
    CHECK_THROWS_AS(EulerSim(dom, solid, RigidState{}, w, quick_params(128, 1.0)),
                    std::invalid_argument);
}

TEST_SUITE_END();
