#include "bodyflow/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

namespace bodyflow {

using nlohmann::json;

DomainGeometry build_domain(const ScenarioConfig& c) {
    if (c.scenario.preset == "disk-in-disk") {
        return disk_domain(c.scenario.domain_radius);
    }
    if (c.scenario.preset == "disk-in-ellipse") {
        return ellipse_domain(c.scenario.ellipse_a, c.scenario.ellipse_b);
    }
    if (c.scenario.preset == "two-hole") {
        DomainGeometry g = disk_domain(c.scenario.domain_radius);
        g.holes.push_back(circle_curve(Vec2(-1.5, 0.9), 0.6, 1024));
        g.holes.push_back(circle_curve(Vec2(1.4, -1.0), 0.5, 1024));
        return g;
    }
    return load_geometry_file(c.scenario.geometry_file).domain;
}

SolidShape build_solid(const ScenarioConfig& c, const DomainGeometry& domain) {
    if (c.scenario.preset == "custom") {
        GeometryFile gf = load_geometry_file(c.scenario.geometry_file);
        const int nb = recommended_body_panels(domain, gf.solid_boundary.perimeter(),
                                               c.numerics.panels);
        return make_solid(gf.solid_boundary, gf.solid_density, nb);
    }
    const double perim = 2.0 * M_PI * c.scenario.solid_radius;
    const int nb = recommended_body_panels(domain, perim, c.numerics.panels);
    return make_solid(circle_curve(Vec2(0.0, 0.0), c.scenario.solid_radius),
                      c.scenario.solid_density, nb);
}

namespace {

struct Bump {
    Vec2 center;
    double amplitude;  // peak vorticity
    double radius;
};

std::vector<Bump> preset_bumps(const ScenarioConfig& c) {
    const auto& w = c.initial.vorticity;
    std::vector<Bump> bumps;
    if (w.preset == "none") return bumps;
    if (w.preset == "single-blob") {
        bumps.push_back({w.center, w.amplitude, w.radius});
    } else if (w.preset == "pair") {
        bumps.push_back({w.center + Vec2(0.0, 0.5 * w.separation), w.amplitude, w.radius});
        bumps.push_back({w.center - Vec2(0.0, 0.5 * w.separation), -w.amplitude, w.radius});
    } else if (w.preset == "random-seeded") {
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
        std::uniform_real_distribution<double> rad(0.2, 0.6);
        std::uniform_real_distribution<double> amp(0.5, 1.0);
        std::uniform_real_distribution<double> sign(0.0, 1.0);
        for (int k = 0; k < w.count; ++k) {
            const double a = angle(rng);
            // Keep the bumps in a mid-domain annulus, away from walls and solid.
            const double rr = rad(rng) * c.scenario.domain_radius;
            Bump b;
            b.center = Vec2(rr * std::cos(a), rr * std::sin(a));
            b.amplitude = w.amplitude * amp(rng) * (sign(rng) < 0.5 ? -1.0 : 1.0);
            b.radius = w.radius;
            bumps.push_back(b);
        }
    }
    return bumps;
}

double bump_vorticity(const std::vector<Bump>& bumps, const Vec2& x) {
    double w = 0.0;
    for (const Bump& b : bumps) {
        w += b.amplitude * std::exp(-(x - b.center).squaredNorm() / (2.0 * b.radius * b.radius));
    }
    return w;
}

}  // namespace

Scene build_scene(const ScenarioConfig& c) {
    Scene s;
    s.domain = build_domain(c);
    s.solid = build_solid(c, s.domain);
    s.initial.h = c.initial.h0;
    s.initial.theta = c.initial.theta0;
    s.initial.l = c.initial.l0;
    s.initial.r = c.initial.r0;

    if (static_cast<int>(c.initial.gamma_holes.size()) >
        static_cast<int>(s.domain.holes.size())) {
        throw ConfigError("initial.gamma_holes: more circulations than holes");
    }

    // Blob core: twice the mean panel length unless overridden.
    double perim = s.domain.outer.perimeter() + s.solid.boundary.perimeter();
    for (const ClosedCurve& h : s.domain.holes) perim += h.perimeter();
    const double mean_panel = perim / c.numerics.panels;
    s.vorticity.eps_blob = c.numerics.eps_blob > 0.0 ? c.numerics.eps_blob : 2.0 * mean_panel;
    s.vorticity.gamma_body = c.initial.gamma_body;
    s.vorticity.gamma_holes = c.initial.gamma_holes;
    s.vorticity.gamma_holes.resize(s.domain.holes.size(), 0.0);

    const std::vector<Bump> bumps = preset_bumps(c);
    if (!bumps.empty()) {
        // Uniform sampling grid over the union of bump supports, sized to hit
        // the requested particle count.
        Vec2 lo(1e300, 1e300), hi(-1e300, -1e300);
        for (const Bump& b : bumps) {
            lo = lo.cwiseMin(b.center - Vec2(3.0 * b.radius, 3.0 * b.radius));
            hi = hi.cwiseMax(b.center + Vec2(3.0 * b.radius, 3.0 * b.radius));
        }
        double support = 0.0;
        for (const Bump& b : bumps) support += M_PI * 9.0 * b.radius * b.radius;
        support = std::min(support, (hi.x() - lo.x()) * (hi.y() - lo.y()));
        const double hp = std::sqrt(support / c.numerics.particles);
        const ClosedCurve placed =
            s.solid.boundary.transformed(placement(s.initial, Vec2(0.0, 0.0)));
        const int mx = static_cast<int>((hi.x() - lo.x()) / hp) + 1;
        const int my = static_cast<int>((hi.y() - lo.y()) / hp) + 1;
        double peak = 0.0;
        for (const Bump& b : bumps) peak = std::max(peak, std::abs(b.amplitude));
        for (int j = 0; j < my; ++j) {
            for (int i = 0; i < mx; ++i) {
                const Vec2 x = lo + Vec2((i + 0.5) * hp, (j + 0.5) * hp);
                bool in_support = false;
                for (const Bump& b : bumps) {
                    if ((x - b.center).norm() < 3.0 * b.radius) in_support = true;
                }
                if (!in_support) continue;
                const double w = bump_vorticity(bumps, x);
                if (std::abs(w) < 1e-8 * peak) continue;
                if (!s.domain.contains(x) || placed.contains(x)) continue;
                if (s.domain.wall_distance(x) < hp || placed.boundary_distance(x) < hp) continue;
                s.vorticity.particles.push_back({x, w * hp * hp});
            }
        }
    }

    // Stream-function form of the same presets for the grid solver.
    std::vector<Bump> stream_bumps = bumps;
    s.initial_stream = [stream_bumps](const Vec2& x) {
        double psi = 0.0;
        for (const Bump& b : stream_bumps) {
            psi += b.amplitude * b.radius * b.radius *
                   std::exp(-(x - b.center).squaredNorm() / (2.0 * b.radius * b.radius));
        }
        return psi;
    };

    s.euler_params.total_panels = c.numerics.panels;
    s.euler_params.dt = c.numerics.dt;
    s.euler_params.cfl = c.numerics.cfl;
    s.euler_params.t_end = c.numerics.t_end;
    s.euler_params.d_min = c.numerics.d_min;
    s.euler_params.quad_resolution = c.numerics.quad_resolution;

    s.ns_params.grid = c.ns.grid;
    s.ns_params.dt = 0.0;  // the diffusive limit of the grid decides
    s.ns_params.t_end = c.numerics.t_end;
    s.ns_params.eta = c.ns.eta;
    s.ns_params.gravity = c.ns.gravity;
    s.ns_params.d_min = c.numerics.d_min;
    return s;
}

EulerSim make_euler_sim(const Scene& scene) {
    return EulerSim(scene.domain, scene.solid, scene.initial, scene.vorticity,
                    scene.euler_params);
}

NsSim make_ns_sim(const Scene& scene) {
    return NsSim(scene.domain, scene.solid, scene.initial, scene.initial_stream,
                 scene.ns_params);
}

GeometryFile load_geometry_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("geometry file not found: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("geometry file parse error: ") + e.what());
    }
    auto read_curve = [&](const json& arr, const std::string& what) {
        if (!arr.is_array() || arr.size() < 3) {
            throw ConfigError(what + ": expected a list of at least 3 points");
        }
        ClosedCurve curve;
        for (const auto& p : arr) {
            if (!p.is_array() || p.size() != 2) throw ConfigError(what + ": points are [x, y]");
            curve.points.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        return curve;
    };
    GeometryFile gf;
    if (!j.contains("outer")) throw ConfigError("geometry file: missing 'outer'");
    gf.domain.outer = read_curve(j["outer"], "outer");
    if (!gf.domain.outer.is_ccw()) gf.domain.outer.reverse();
    if (j.contains("holes")) {
        for (const auto& h : j["holes"]) {
            ClosedCurve c = read_curve(h, "holes");
            if (c.is_ccw()) c.reverse();
            gf.domain.holes.push_back(std::move(c));
        }
    }
    if (!j.contains("solid") || !j["solid"].is_object()) {
        throw ConfigError("geometry file: missing 'solid' object");
    }
    gf.solid_boundary = read_curve(j["solid"]["points"], "solid.points");
    gf.solid_density = j["solid"].value("density", 1.0);
    if (gf.solid_density <= 0.0) throw ConfigError("solid.density: must be positive");
    return gf;
}

namespace {

ScenarioConfig perturbed(const ScenarioConfig& base, double eps) {
    ScenarioConfig c = base;
    if (base.uniqueness.channel == "l0") {
        c.initial.l0.x() += eps;
    } else if (base.uniqueness.channel == "r0") {
        c.initial.r0 += eps;
    } else {
        c.initial.vorticity.amplitude *= (1.0 + eps);
    }
    return c;
}

}  // namespace

DecayStudy run_decay_study(const ScenarioConfig& config) {
    DecayStudy study;
    study.times = config.uniqueness.times;
    const bool euler_mode = config.uniqueness.mode == "euler";

    Scene base_scene = build_scene(config);
    MaskedGrid grid = MaskedGrid::build(base_scene.domain, config.numerics.quad_resolution);

    struct SampleSet {
        std::vector<FlowSample> samples;
    };

    auto run_samples = [&](const ScenarioConfig& cfg, double forced_dt) {
        SampleSet set;
        Scene scene = build_scene(cfg);
        if (euler_mode) {
            EulerParams params = scene.euler_params;
            params.dt = forced_dt;
            params.t_end = config.uniqueness.times.back();
            EulerSim sim(scene.domain, scene.solid, scene.initial, scene.vorticity, params);
            std::vector<EulerSim::Snapshot> snaps;
            sim.run_with_snapshots(config.uniqueness.times, snaps);
            for (const auto& sn : snaps) {
                EulerState st = sim.rebuild(sn.t, sn.solid, sn.vorticity);
                auto flow = st.flow;
                set.samples.push_back(
                    {sn.t, sn.solid, [flow](const Vec2& x) { return flow->velocity(x); }});
            }
        } else {
            NsParams params = scene.ns_params;
            params.t_end = config.uniqueness.times.back();
            NsSim sim(scene.domain, scene.solid, scene.initial, scene.initial_stream, params);
            std::size_t next = 0;
            auto snap_if_due = [&]() {
                while (next < config.uniqueness.times.size() &&
                       sim.time() >= config.uniqueness.times[next] - 1e-12) {
                    auto field = std::make_shared<NsFieldSample>(sim.field_sample());
                    set.samples.push_back({sim.time(), sim.solid_state(),
                                           [field](const Vec2& x) {
                                               return field->velocity(x);
                                           }});
                    ++next;
                }
            };
            snap_if_due();
            while (sim.time() < params.t_end - 1e-12) {
                sim.step();
                snap_if_due();
            }
        }
        return set;
    };

    double dt = 0.0;
    if (euler_mode) {
        EulerSim probe = make_euler_sim(base_scene);
        dt = probe.auto_dt();
    }

    const SampleSet base = run_samples(config, dt);
    const ClosedCurve body_ref =
        base_scene.solid.boundary.transformed(placement(base_scene.initial, Vec2(0.0, 0.0)));

    // Self comparison: identical runs must produce a zero functional.
    study.self_energy.clear();
    for (std::size_t ti = 0; ti < config.uniqueness.times.size(); ++ti) {
        const HatRow row = hat_energy(base.samples[ti], base.samples[ti], base_scene.initial,
                                      base_scene.domain, body_ref, grid,
                                      config.numerics.flow_substeps);
        study.self_energy.push_back(row.total);
    }
    for (double eps : config.uniqueness.epsilons) {
        const SampleSet pert = run_samples(perturbed(config, eps), dt);
        for (std::size_t ti = 0; ti < config.uniqueness.times.size(); ++ti) {
            const HatRow row = hat_energy(base.samples[ti], pert.samples[ti], base_scene.initial,
                                          base_scene.domain, body_ref, grid,
                                          config.numerics.flow_substeps);
            study.table.push_back({eps, config.uniqueness.times[ti], row.total});
        }
    }
    analyze_decay(study);
    return study;
}

}  // namespace bodyflow
