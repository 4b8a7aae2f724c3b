#include "bodyflow/uniqueness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bodyflow/parallel.hpp"

namespace bodyflow {

HatRow hat_energy(const FlowSample& run1, const FlowSample& run2, const RigidState& reference,
                  const DomainGeometry& domain, const ClosedCurve& body_reference,
                  MaskedGrid& grid, int substeps) {
    // Relative motions from the shared reference placement.
    const RigidMotion g_ref = placement(reference, Vec2(0.0, 0.0));
    const RigidMotion g1 = placement(run1.solid, Vec2(0.0, 0.0)).compose(g_ref.inverse());
    const RigidMotion g2 = placement(run2.solid, Vec2(0.0, 0.0)).compose(g_ref.inverse());

    // Common cutoff width from the tighter of the placements along the way.
    const double c_ref = clearance(domain, body_reference).distance;
    const double c1 = clearance(domain, body_reference.transformed(g1)).distance;
    const double c2 = clearance(domain, body_reference.transformed(g2)).distance;
    DiffeoParams params;
    params.delta = std::min({c_ref, c1, c2}) / 3.2;
    params.substeps = substeps;

    auto phi = std::make_shared<CompareMap>(compare_maps(g1, g2, domain, body_reference, params));
    VelocityEvaluator u2_tilde = pullback_velocity(run2.velocity, phi);

    HatRow row;
    row.t = run1.t;
    const Mat2 q_rel = rotation_matrix(run1.solid.theta - run2.solid.theta);
    const Vec2 l_hat = run1.solid.l - q_rel * run2.solid.l;
    row.l_sq = l_hat.squaredNorm();
    row.r_sq = (run1.solid.r - run2.solid.r) * (run1.solid.r - run2.solid.r);
    row.h_sq = (run1.solid.h - run2.solid.h).squaredNorm();
    row.theta_sq = (run1.solid.theta - run2.solid.theta) * (run1.solid.theta - run2.solid.theta);

    const ClosedCurve body1 = body_reference.transformed(g1);
    grid.set_body(&body1);
    const auto& cells = grid.cells();
    std::vector<double> vals(cells.size());
    parallel_for(cells.size(), [&](std::size_t c) {
        const Vec2 du = run1.velocity(cells[c].x) - u2_tilde(cells[c].x);
        vals[c] = du.squaredNorm() * cells[c].w;
    });
    double s = 0.0;
    for (double v : vals) s += v;
    row.u_sq = s;
    row.total = row.u_sq + row.l_sq + row.r_sq + row.h_sq + row.theta_sq;
    return row;
}

double fit_slope(const std::vector<double>& eps, const std::vector<double>& energy) {
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (energy[i] <= 0.0) continue;
        const double x = std::log(eps[i]);
        const double y = std::log(energy[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void analyze_decay(DecayStudy& study) {
    study.slopes.clear();
    study.monotone_in_eps = true;
    for (double t : study.times) {
        std::vector<double> eps, en;
        for (const DecayEntry& e : study.table) {
            if (std::abs(e.t - t) < 1e-12) {
                eps.push_back(e.eps);
                en.push_back(e.energy);
            }
        }
        // Entries arrive with decreasing eps; E must decrease with them.
        for (std::size_t i = 0; i + 1 < en.size(); ++i) {
            if (!(en[i] > en[i + 1])) study.monotone_in_eps = false;
        }
        study.slopes.push_back(fit_slope(eps, en));
    }
    study.slopes_positive = true;
    for (double s : study.slopes) {
        if (!(s > 0.0)) study.slopes_positive = false;
    }
    study.slopes_nonincreasing = true;
    for (std::size_t i = 0; i + 1 < study.slopes.size(); ++i) {
        if (study.slopes[i + 1] > study.slopes[i] + 0.2) study.slopes_nonincreasing = false;
    }
}

}  // namespace bodyflow
