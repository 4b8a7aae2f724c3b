// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0
//
// Command line front end: simulate-euler, simulate-ns, uniqueness and
// added-mass subcommands. Exit codes: 0 success, 1 error, 2 run terminated
// by a solid-wall collision.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bodyflow/config.hpp"
#include "bodyflow/parallel.hpp"
#include "bodyflow/scenario.hpp"

namespace fs = std::filesystem;
using namespace bodyflow;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitCollision = 2;

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    unsigned long long seed = 0;
    bool seed_set = false;
    int threads = 0;
    int dump_every = 0;
    bool dump_matrices = false;
};

ScenarioConfig load_config(const CliOptions& opt) {
    ScenarioConfig cfg =
        opt.config_path.empty() ? ScenarioConfig{} : parse_config(opt.config_path);
    if (!opt.out_dir.empty()) cfg.output.dir = opt.out_dir;
    if (const char* env = std::getenv("BODYFLOW_OUT")) {
        if (opt.out_dir.empty()) cfg.output.dir = env;
    }
    if (opt.seed_set) cfg.seed = opt.seed;
    if (opt.dump_every > 0) cfg.output.dump_every = opt.dump_every;
    return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path);
    out << text;
}

fs::path prepare_output(const ScenarioConfig& cfg) {
    fs::path dir(cfg.output.dir);
    fs::create_directories(dir);
    write_text(dir / "effective-config.json", emit_config(cfg));
    return dir;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

int cmd_simulate_euler(const ScenarioConfig& cfg, bool dump_matrices) {
    const fs::path dir = prepare_output(cfg);
    Scene scene = build_scene(cfg);
    EulerSim sim = make_euler_sim(scene);

    if (dump_matrices) {
        FlowSolveDebug dbg;
        solve_flow(scene.vorticity, scene.initial, sim.state().panels, &dbg);
        std::ofstream out(dir / "flow-matrix.txt");
        out << dbg.matrix.rows() << " " << dbg.matrix.cols() << "\n";
        for (Eigen::Index i = 0; i < dbg.matrix.rows(); ++i) {
            for (Eigen::Index j = 0; j < dbg.matrix.cols(); ++j) {
                out << fmt(dbg.matrix(i, j)) << (j + 1 == dbg.matrix.cols() ? "\n" : " ");
            }
        }
    }

    std::ofstream csv(dir / "monitors.csv");
    csv << "t,hx,hy,theta,lx,ly,r,energy,gamma0";
    for (std::size_t i = 0; i < scene.domain.holes.size(); ++i) csv << ",gamma" << i + 1;
    csv << ",clearance,sum_abs_strength\n";
    std::ofstream snaps;
    int snap_id = 0;

    const double dt = sim.auto_dt();
    int k = 0;
    RunStatus status = RunStatus::Completed;
    auto emit = [&]() {
        const EulerMonitorRow row = sim.monitor_row();
        csv << fmt(row.t) << "," << fmt(row.solid.h.x()) << "," << fmt(row.solid.h.y()) << ","
            << fmt(row.solid.theta) << "," << fmt(row.solid.l.x()) << "," << fmt(row.solid.l.y())
            << "," << fmt(row.solid.r) << "," << fmt(row.energy);
        for (double g : row.circulations) csv << "," << fmt(g);
        csv << "," << fmt(row.clearance) << "," << fmt(row.sum_abs_strength) << "\n";
        if (cfg.output.snapshots) {
            std::ofstream ps(dir / ("particles-" + std::to_string(snap_id++) + ".csv"));
            ps << "x,y,strength\n";
            for (const VortexParticle& p : sim.state().vorticity.particles) {
                ps << fmt(p.x.x()) << "," << fmt(p.x.y()) << "," << fmt(p.strength) << "\n";
            }
        }
    };
    emit();
    while (sim.state().t < cfg.numerics.t_end - 1e-12) {
        const double step_dt = std::min(dt, cfg.numerics.t_end - sim.state().t);
        status = sim.step(step_dt);
        ++k;
        if (k % cfg.output.dump_every == 0 || status == RunStatus::Collision) emit();
        if (status == RunStatus::Collision) break;
    }
    return status == RunStatus::Collision ? kExitCollision : kExitOk;
}

int cmd_simulate_ns(const ScenarioConfig& cfg) {
    const fs::path dir = prepare_output(cfg);
    Scene scene = build_scene(cfg);
    NsSim sim = make_ns_sim(scene);

    std::ofstream csv(dir / "monitors.csv");
    csv << "t,lx,ly,r,hx,hy,theta,kinetic_energy,dissipation_integral,energy_residual,"
           "clearance\n";
    auto emit = [&]() {
        const NsMonitorRow row = sim.monitor_row();
        csv << fmt(row.t) << "," << fmt(row.solid.l.x()) << "," << fmt(row.solid.l.y()) << ","
            << fmt(row.solid.r) << "," << fmt(row.solid.h.x()) << "," << fmt(row.solid.h.y())
            << "," << fmt(row.solid.theta) << "," << fmt(row.kinetic_energy) << ","
            << fmt(row.dissipation_integral) << "," << fmt(row.energy_residual) << ","
            << fmt(row.clearance) << "\n";
    };
    emit();
    int k = 0, snap_id = 0;
    RunStatus status = RunStatus::Completed;
    while (sim.time() < cfg.numerics.t_end - 1e-12) {
        status = sim.step();
        ++k;
        if (k % cfg.output.dump_every == 0 || status == RunStatus::Collision) {
            emit();
            if (cfg.output.snapshots) {
                sim.write_snapshot((dir / ("field-" + std::to_string(snap_id++) + ".txt")).string());
            }
        }
        if (status == RunStatus::Collision) break;
    }
    return status == RunStatus::Collision ? kExitCollision : kExitOk;
}

int cmd_uniqueness(const ScenarioConfig& cfg) {
    const fs::path dir = prepare_output(cfg);
    const DecayStudy study = run_decay_study(cfg);
    std::ofstream csv(dir / ("rate-table-" + cfg.uniqueness.mode + ".csv"));
    csv << "epsilon,t,E,slope\n";
    for (const DecayEntry& e : study.table) {
        double slope = 0.0;
        for (std::size_t ti = 0; ti < study.times.size(); ++ti) {
            if (std::abs(study.times[ti] - e.t) < 1e-12) slope = study.slopes[ti];
        }
        csv << fmt(e.eps) << "," << fmt(e.t) << "," << fmt(e.energy) << "," << fmt(slope) << "\n";
    }
    std::cout << "uniqueness decay (" << cfg.uniqueness.mode << "):";
    for (std::size_t ti = 0; ti < study.times.size(); ++ti) {
        std::cout << "  t=" << study.times[ti] << " slope=" << study.slopes[ti];
    }
    std::cout << "\n  monotone_in_eps=" << (study.monotone_in_eps ? "yes" : "no")
              << " slopes_positive=" << (study.slopes_positive ? "yes" : "no")
              << " slopes_nonincreasing=" << (study.slopes_nonincreasing ? "yes" : "no") << "\n";
    return kExitOk;
}

int cmd_added_mass(const ScenarioConfig& cfg) {
    const fs::path dir = prepare_output(cfg);
    Scene scene = build_scene(cfg);
    auto panels = std::make_shared<PanelSystem>(build_panels(
        scene.domain, &scene.solid, placement(scene.initial, Vec2(0.0, 0.0)),
        cfg.numerics.panels));
    const KirchhoffSet ks = solve_kirchhoff(scene.initial, panels);
    const AddedMass am = added_mass(ks, scene.solid.mass, scene.solid.inertia);

    std::cout << "added mass (body + fluid):\n";
    for (int i = 0; i < 3; ++i) {
        std::printf("  %14.8f %14.8f %14.8f\n", am.total(i, 0), am.total(i, 1), am.total(i, 2));
    }
    std::ofstream out(dir / "added-mass.txt");
    out << "# total, fluid contribution\n";
    for (int i = 0; i < 3; ++i) {
        out << fmt(am.total(i, 0)) << " " << fmt(am.total(i, 1)) << " " << fmt(am.total(i, 2))
            << "\n";
    }
    for (int i = 0; i < 3; ++i) {
        out << fmt(am.fluid(i, 0)) << " " << fmt(am.fluid(i, 1)) << " " << fmt(am.fluid(i, 2))
            << "\n";
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Planar incompressible flow with a moving rigid body"};
    app.require_subcommand(1);

    CliOptions opt;
    app.add_option("--config", opt.config_path, "JSON scenario configuration");
    app.add_option("--out", opt.out_dir, "output directory (overrides config)");
    auto* seed_opt = app.add_option("--seed", opt.seed, "RNG seed (overrides config)");
    app.add_option("--threads", opt.threads, "worker thread count");
    app.add_option("--dump-every", opt.dump_every, "monitor cadence in steps");
    app.add_flag("--dump-matrices", opt.dump_matrices, "write influence matrices");

    auto* euler = app.add_subcommand("simulate-euler", "vortex-particle solver run");
    auto* ns = app.add_subcommand("simulate-ns", "penalized grid solver run");
    auto* uniq = app.add_subcommand("uniqueness", "perturbation decay study");
    auto* amass = app.add_subcommand("added-mass", "print and store the added-mass matrix");

    CLI11_PARSE(app, argc, argv);
    opt.seed_set = seed_opt->count() > 0;

    if (opt.threads > 0) {
        set_worker_threads(opt.threads);
    } else if (const char* env = std::getenv("BODYFLOW_THREADS")) {
        set_worker_threads(std::atoi(env));
    }

    try {
        const ScenarioConfig cfg = load_config(opt);
        if (euler->parsed()) return cmd_simulate_euler(cfg, opt.dump_matrices);
        if (ns->parsed()) return cmd_simulate_ns(cfg);
        if (uniq->parsed()) return cmd_uniqueness(cfg);
        if (amass->parsed()) return cmd_added_mass(cfg);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}
