#include "bodyflow/euler_sim.hpp"

#include <cmath>
#include <stdexcept>

#include "bodyflow/parallel.hpp"

namespace bodyflow {

EulerSim::EulerSim(DomainGeometry domain, SolidShape solid, RigidState initial,
                   VorticityField vorticity, EulerParams params)
    : domain_(std::move(domain)),
      solid_(std::move(solid)),
      params_(params),
      grid_(MaskedGrid::build(domain_, params.quad_resolution, params.quad_subsamples)) {
    const ClosedCurve placed = solid_.boundary.transformed(placement(initial, Vec2(0.0, 0.0)));
    for (const VortexParticle& p : vorticity.particles) {
        if (!domain_.contains(p.x) || placed.contains(p.x)) {
            throw std::invalid_argument("EulerSim: initial particle outside the fluid region");
        }
    }
    state_ = make_cache(0.0, initial, vorticity);
}

EulerState EulerSim::make_cache(double t, const RigidState& solid,
                                const VorticityField& w) const {
    EulerState st;
    st.t = t;
    st.solid = solid;
    st.vorticity = w;
    auto panels = std::make_shared<PanelSystem>(
        build_panels(domain_, &solid_, placement(solid, Vec2(0.0, 0.0)), params_.total_panels));
    st.panels = panels;
    st.flow = std::make_shared<FlowSolution>(solve_flow(w, solid, panels));
    st.kirchhoff = std::make_shared<KirchhoffSet>(solve_kirchhoff(solid, panels));
    st.am = std::make_shared<AddedMass>(added_mass(*st.kirchhoff, solid_.mass, solid_.inertia));
    return st;
}

EulerState EulerSim::rebuild(double t, const RigidState& solid, const VorticityField& w) const {
    return make_cache(t, solid, w);
}

ClosedCurve EulerSim::placed_body() const {
    return solid_.boundary.transformed(placement(state_.solid, Vec2(0.0, 0.0)));
}

double EulerSim::collision_threshold() const {
    if (params_.d_min > 0.0) return params_.d_min;
    return 2.0 * state_.panels->mean_body_panel_length();
}

double EulerSim::auto_dt() const {
    if (params_.dt > 0.0) return params_.dt;
    double umax = 1e-6;
    for (const VortexParticle& p : state_.vorticity.particles) {
        umax = std::max(umax, state_.flow->velocity(p.x).norm());
    }
    const auto& loops = state_.panels->loops;
    for (std::size_t li = 0; li < loops.size(); ++li) {
        for (std::size_t q = 0; q < loops[li].panels.size(); ++q) {
            umax = std::max(
                umax,
                state_.flow->boundary_velocity(static_cast<int>(li), static_cast<int>(q)).norm());
        }
    }
    return params_.cfl * state_.panels->min_panel_length() / umax;
}

Vec3 EulerSim::solid_accel(const EulerState& cache) const {
    const KirchhoffSet& ks = *cache.kirchhoff;
    const FlowSolution& flow = *cache.flow;
    const PanelSystem& ps = *cache.panels;
    const RigidState& s = cache.solid;

    // Volume term: integral of u . (u . grad) grad Phi_i over the fluid,
    // the Hessian action taken by forward differencing of grad Phi_i.
    const ClosedCurve placed = solid_.boundary.transformed(placement(s, Vec2(0.0, 0.0)));
    grid_.set_body(&placed);

    const double body_scale = std::sqrt(std::abs(solid_.boundary.signed_area()) / M_PI);
    const double fd = 1e-5 * body_scale;
    const auto& cells = grid_.cells();
    std::vector<Vec3> vals(cells.size());
    parallel_for(cells.size(), [&](std::size_t c) {
        const Vec2 x = cells[c].x;
        const Vec2 u = flow.velocity(x, true);
        const double speed = u.norm();
        Vec3 v = Vec3::Zero();
        if (speed > 1e-14) {
            const Vec2 dir = u / speed;
            Vec2 g0[3], g1[3];
            ks.grads(x, g0, true);
            ks.grads(x + fd * dir, g1, true);
            for (int i = 0; i < 3; ++i) {
                v(i) = u.dot((g1[i] - g0[i]) / fd * speed) * cells[c].w;
            }
        }
        vals[c] = v;
    });
    Vec3 volume = Vec3::Zero();
    for (const Vec3& v : vals) volume += v;

    // Boundary term: B_i = (l, r) . contour integral of (u . grad Phi_i)
    // against (n, (x-h)^perp . n).
    Vec3 boundary = Vec3::Zero();
    const auto& body = ps.body().panels;
    for (std::size_t p = 0; p < body.size(); ++p) {
        const Panel& pn = body[p];
        const Vec2 u_b = flow.boundary_velocity(0, static_cast<int>(p));
        for (int i = 0; i < 3; ++i) {
            const double ugphi = u_b.dot(ks.body_grad(i, static_cast<int>(p)));
            const Vec3 payload(pn.normal.x(), pn.normal.y(), perp(pn.mid - s.h).dot(pn.normal));
            const Vec3 lr(s.l.x(), s.l.y(), s.r);
            boundary(i) += ugphi * lr.dot(payload) * pn.len;
        }
    }

    return cache.am->total.ldlt().solve(volume - boundary);
}

Vec3 EulerSim::solid_rhs() const { return solid_accel(state_); }

EulerSim::Derivative EulerSim::eval_rhs(const Stage& y) const {
    VorticityField w = state_.vorticity;
    for (std::size_t k = 0; k < w.particles.size(); ++k) w.particles[k].x = y.xs[k];
    EulerState cache = make_cache(state_.t, y.solid, w);

    Derivative d;
    d.xdot.resize(y.xs.size());
    const FlowSolution& flow = *cache.flow;
    parallel_for(y.xs.size(), [&](std::size_t k) { d.xdot[k] = flow.velocity(y.xs[k]); });
    d.hdot = y.solid.l;
    d.thetadot = y.solid.r;
    const Vec3 acc = solid_accel(cache);
    d.ldot = Vec2(acc(0), acc(1));
    d.rdot = acc(2);
    return d;
}

EulerSim::Stage EulerSim::advance_stage(const Stage& y0, const Derivative& k, double dt) {
    Stage y = y0;
    for (std::size_t i = 0; i < y.xs.size(); ++i) y.xs[i] += dt * k.xdot[i];
    y.solid.h += dt * k.hdot;
    y.solid.theta += dt * k.thetadot;
    y.solid.l += dt * k.ldot;
    y.solid.r += dt * k.rdot;
    return y;
}

RunStatus EulerSim::step(double dt) {
    Stage y0;
    y0.xs.resize(state_.vorticity.particles.size());
    for (std::size_t k = 0; k < y0.xs.size(); ++k) y0.xs[k] = state_.vorticity.particles[k].x;
    y0.solid = state_.solid;

    const Derivative k1 = eval_rhs(y0);
    const Derivative k2 = eval_rhs(advance_stage(y0, k1, 0.5 * dt));
    const Derivative k3 = eval_rhs(advance_stage(y0, k2, 0.5 * dt));
    const Derivative k4 = eval_rhs(advance_stage(y0, k3, dt));

    Stage y1 = y0;
    for (std::size_t i = 0; i < y1.xs.size(); ++i) {
        y1.xs[i] += dt / 6.0 * (k1.xdot[i] + 2.0 * k2.xdot[i] + 2.0 * k3.xdot[i] + k4.xdot[i]);
    }
    y1.solid.h += dt / 6.0 * (k1.hdot + 2.0 * k2.hdot + 2.0 * k3.hdot + k4.hdot);
    y1.solid.theta +=
        dt / 6.0 * (k1.thetadot + 2.0 * k2.thetadot + 2.0 * k3.thetadot + k4.thetadot);
    y1.solid.l += dt / 6.0 * (k1.ldot + 2.0 * k2.ldot + 2.0 * k3.ldot + k4.ldot);
    y1.solid.r += dt / 6.0 * (k1.rdot + 2.0 * k2.rdot + 2.0 * k3.rdot + k4.rdot);

    enforce_containment(y1.xs, y1.solid);

    VorticityField w = state_.vorticity;  // strengths and circulations unchanged
    for (std::size_t k = 0; k < w.particles.size(); ++k) w.particles[k].x = y1.xs[k];
    state_ = make_cache(state_.t + dt, y1.solid, w);

    const Clearance c = clearance(domain_, placed_body());
    if (c.collision || c.distance <= collision_threshold()) return RunStatus::Collision;
    return RunStatus::Completed;
}

void EulerSim::enforce_containment(std::vector<Vec2>& xs, const RigidState& solid) const {
    // Coarse steps can push a particle through a boundary. Shallow
    // penetrations (under one blob core) are projected back to the fluid
    // side; deeper ones are a genuine resolution failure.
    const ClosedCurve placed = solid_.boundary.transformed(placement(solid, Vec2(0.0, 0.0)));
    const double eps = state_.vorticity.eps_blob;
    for (Vec2& x : xs) {
        if (placed.contains(x)) {
            const double pen = placed.boundary_distance(x);
            if (pen >= eps) {
                throw std::runtime_error("euler step: particle penetrated the solid");
            }
            const Vec2 p = project_to_curve(placed, x);
            x = p + (pen + 1e-3 * eps) * (p - x).normalized();
        } else if (!domain_.contains(x)) {
            double pen = domain_.outer.boundary_distance(x);
            const ClosedCurve* wall = &domain_.outer;
            for (const ClosedCurve& hcurve : domain_.holes) {
                if (hcurve.contains(x)) {
                    wall = &hcurve;
                    pen = hcurve.boundary_distance(x);
                }
            }
            if (pen >= eps) {
                throw std::runtime_error("euler step: particle escaped the domain");
            }
            const Vec2 p = project_to_curve(*wall, x);
            x = p + (pen + 1e-3 * eps) * (p - x).normalized();
        }
    }
}

double EulerSim::energy() const {
    ClosedCurve placed = placed_body();
    grid_.set_body(&placed);
    const FlowSolution& flow = *state_.flow;
    const double field =
        grid_.integrate([&](const Vec2& x) { return flow.velocity(x, true).squaredNorm(); });
    return field + solid_.mass * state_.solid.l.squaredNorm() +
           solid_.inertia * state_.solid.r * state_.solid.r;
}

EulerMonitorRow EulerSim::monitor_row() const {
    EulerMonitorRow row;
    row.t = state_.t;
    row.solid = state_.solid;
    row.energy = energy();
    for (int c = 0; c < state_.flow->cycles(); ++c) row.circulations.push_back(state_.flow->circulation(c));
    row.clearance = clearance(domain_, placed_body()).distance;
    row.sum_abs_strength = state_.vorticity.sum_abs_strength();
    return row;
}

EulerRunResult EulerSim::run() {
    std::vector<Snapshot> unused;
    return run_with_snapshots({}, unused);
}

EulerRunResult EulerSim::run_with_snapshots(const std::vector<double>& times,
                                            std::vector<Snapshot>& out) {
    EulerRunResult res;
    const double dt = auto_dt();
    res.monitors.push_back(monitor_row());
    std::size_t next_snap = 0;
    auto maybe_snapshot = [&]() {
        while (next_snap < times.size() && state_.t >= times[next_snap] - 1e-12) {
            out.push_back({state_.t, state_.solid, state_.vorticity});
            ++next_snap;
        }
    };
    maybe_snapshot();
    while (state_.t < params_.t_end - 1e-12) {
        const double step_dt = std::min(dt, params_.t_end - state_.t);
        const RunStatus s = step(step_dt);
        res.monitors.push_back(monitor_row());
        maybe_snapshot();
        if (s == RunStatus::Collision) {
            res.status = RunStatus::Collision;
            break;
        }
    }
    res.final_time = state_.t;
    return res;
}

void EulerSim::negate_motion() {
    RigidState s = state_.solid;
    s.l = -s.l;
    s.r = -s.r;
    VorticityField w = state_.vorticity;
    for (VortexParticle& p : w.particles) p.strength = -p.strength;
    w.gamma_body = -w.gamma_body;
    for (double& g : w.gamma_holes) g = -g;
    state_ = make_cache(state_.t, s, w);
}

}  // namespace bodyflow
