// Hot-path timings: influence assembly and solve, blob field evaluation,
// the neighborhood map flow, and one grid-solver step.

#include <benchmark/benchmark.h>

#include <memory>
#include <random>

#include "bodyflow/diffeo.hpp"
#include "bodyflow/ns_sim.hpp"
#include "bodyflow/potential_flow.hpp"

using namespace bodyflow;

namespace {

VorticityField random_particles(int n, double eps) {
    VorticityField w;
    w.eps_blob = eps;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int k = 0; k < n; ++k) {
        w.particles.push_back({Vec2(val(rng) * 1.2 - 1.3, val(rng) * 1.2), 0.01 * val(rng)});
    }
    return w;
}

}  // namespace

static void BM_FlowSolve(benchmark::State& state) {
    const int panels = static_cast<int>(state.range(0));
    DomainGeometry dom = disk_domain(3.0);
    SolidShape solid = disk_solid(0.5, 2.0, panels / 3);
    auto ps = std::make_shared<PanelSystem>(
        build_panels(dom, &solid, RigidMotion(0.0, Vec2(0.8, 0.0)), panels));
    VorticityField w = random_particles(500, 0.1);
    RigidState s;
    s.h = Vec2(0.8, 0.0);
    s.l = Vec2(0.1, 0.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_flow(w, s, ps));
    }
}
BENCHMARK(BM_FlowSolve)->Arg(128)->Arg(256)->Arg(512);

static void BM_BlobFieldEval(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    VorticityField w = random_particles(n, 0.1);
    double acc = 0.0;
    for (auto _ : state) {
        Vec2 u(0.0, 0.0);
        for (const VortexParticle& p : w.particles) {
            u += blob_velocity(p.x, p.strength, w.eps_blob, Vec2(0.4, 0.2));
        }
        acc += u.x();
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_BlobFieldEval)->Arg(1000)->Arg(4000);

static void BM_DiffeoForward(benchmark::State& state) {
    DomainGeometry dom = disk_domain(3.0);
    const ClosedCurve body = circle_curve(Vec2(0.0, 0.0), 0.5);
    DiffeoParams params;
    params.delta = 0.2;
    const DiffeoMap psi = build_psi(se2_exp(Vec2(0.12, -0.08), 0.2), dom, body, params);
    double acc = 0.0;
    for (auto _ : state) {
        acc += psi.forward(Vec2(0.75, 0.1)).x();
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_DiffeoForward);

static void BM_NsStep(benchmark::State& state) {
    const int grid = static_cast<int>(state.range(0));
    NsParams p;
    p.grid = grid;
    p.t_end = 1.0;
    DomainGeometry dom = disk_domain(1.5);
    SolidShape solid = disk_solid(0.3, 2.0, 64);
    NsSim sim(dom, solid, RigidState{},
              [](const Vec2& x) { return 0.05 * std::exp(-x.squaredNorm()); }, p);
    for (auto _ : state) {
        sim.step();
    }
}
BENCHMARK(BM_NsStep)->Arg(64)->Arg(128);

BENCHMARK_MAIN();
