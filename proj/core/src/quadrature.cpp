#include "bodyflow/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "bodyflow/parallel.hpp"

namespace bodyflow {

namespace {

double region_coverage(const Vec2& center, double h, int ss, double signed_dist,
                       const std::function<bool(const Vec2&)>& contains) {
    const double half_diag = 0.7072 * h;
    if (signed_dist <= -half_diag) return 1.0;
    if (signed_dist >= half_diag) return 0.0;
    int in = 0;
    for (int a = 0; a < ss; ++a) {
        for (int b = 0; b < ss; ++b) {
            const Vec2 p = center + Vec2((a + 0.5) / ss - 0.5, (b + 0.5) / ss - 0.5) * h;
            if (contains(p)) ++in;
        }
    }
    return static_cast<double>(in) / (ss * ss);
}

}  // namespace

MaskedGrid MaskedGrid::build(const DomainGeometry& domain, int resolution, int subsamples) {
    MaskedGrid g;
    g.domain_ = &domain;
    g.subsamples_ = subsamples;
    Vec2 lo, hi;
    domain.bounding_box(lo, hi);
    const Vec2 ext = hi - lo;
    const double span = std::max(ext.x(), ext.y());
    const double pad = 0.02 * span;
    g.h_ = (span + 2.0 * pad) / resolution;
    g.origin_ = lo - Vec2(pad, pad);
    g.nx_ = static_cast<int>(std::ceil((ext.x() + 2.0 * pad) / g.h_));
    g.ny_ = static_cast<int>(std::ceil((ext.y() + 2.0 * pad) / g.h_));

    const std::size_t ncell = static_cast<std::size_t>(g.nx_) * g.ny_;
    g.wall_cov_.assign(ncell, 0.0);
    g.eval_point_.assign(ncell, Vec2(0.0, 0.0));
    auto contains = [&](const Vec2& p) { return domain.contains(p); };
    parallel_for(ncell, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) % g.nx_;
        const int j = static_cast<int>(idx) / g.nx_;
        const Vec2 c = g.center(i, j);
        // Signed distance to the fluid container: negative well inside.
        const double d_bnd = domain.wall_distance(c);
        const bool inside = domain.contains(c);
        const double sd = inside ? -d_bnd : d_bnd;
        g.wall_cov_[idx] = region_coverage(c, g.h_, subsamples, sd, contains);
        Vec2 ev = c;
        if (!inside && g.wall_cov_[idx] > 0.0) {
            // Keep cut-cell evaluation on the fluid side of the walls.
            const ClosedCurve* nearest = &domain.outer;
            double best = domain.outer.boundary_distance(c);
            for (const ClosedCurve& hole : domain.holes) {
                const double d = hole.boundary_distance(c);
                if (d < best) {
                    best = d;
                    nearest = &hole;
                }
            }
            const Vec2 p = project_to_curve(*nearest, c);
            ev = p + (best + 0.2 * g.h_) * (p - c).normalized();
        }
        g.eval_point_[idx] = ev;
    });
    g.weight_ = g.wall_cov_;
    for (double& w : g.weight_) w *= g.h_ * g.h_;
    g.rebuild_active();
    return g;
}

void MaskedGrid::set_body(const ClosedCurve* placed_body) {
    weight_ = wall_cov_;
    const double cell_area = h_ * h_;
    for (double& w : weight_) w *= cell_area;
    body_eval_.clear();
    if (placed_body) {
        Vec2 lo(1e300, 1e300), hi(-1e300, -1e300);
        for (const Vec2& p : placed_body->points) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        lo -= Vec2(h_, h_);
        hi += Vec2(h_, h_);
        const int i0 = std::max(0, static_cast<int>((lo.x() - origin_.x()) / h_));
        const int i1 = std::min(nx_ - 1, static_cast<int>((hi.x() - origin_.x()) / h_) + 1);
        const int j0 = std::max(0, static_cast<int>((lo.y() - origin_.y()) / h_));
        const int j1 = std::min(ny_ - 1, static_cast<int>((hi.y() - origin_.y()) / h_) + 1);
        auto contains = [&](const Vec2& p) { return placed_body->contains(p); };
        for (int j = j0; j <= j1; ++j) {
            for (int i = i0; i <= i1; ++i) {
                const std::size_t idx = static_cast<std::size_t>(j) * nx_ + i;
                if (weight_[idx] == 0.0) continue;
                const Vec2 c = center(i, j);
                const double sd = placed_body->signed_distance(c);
                const double cov = region_coverage(c, h_, subsamples_, sd, contains);
                weight_[idx] *= (1.0 - cov);
                if (weight_[idx] > 0.0 && sd <= 0.0) {
                    // Cut cell with its centre inside the solid: evaluate on
                    // the fluid side instead.
                    const Vec2 p = project_to_curve(*placed_body, c);
                    body_eval_[idx] = p + (0.2 * h_) * (p - c).normalized();
                }
            }
        }
    }
    rebuild_active();
}

void MaskedGrid::rebuild_active() {
    active_.clear();
    active_.reserve(weight_.size());
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const std::size_t idx = static_cast<std::size_t>(j) * nx_ + i;
            const double w = weight_[idx];
            if (w > 0.0) {
                auto it = body_eval_.find(idx);
                active_.push_back({it != body_eval_.end() ? it->second : eval_point_[idx], w});
            }
        }
    }
}

double MaskedGrid::area() const {
    double a = 0.0;
    for (const Cell& c : active_) a += c.w;
    return a;
}

double MaskedGrid::integrate(const std::function<double(const Vec2&)>& f) const {
    std::vector<double> vals(active_.size());
    parallel_for(active_.size(), [&](std::size_t i) { vals[i] = f(active_[i].x) * active_[i].w; });
    double s = 0.0;
    for (double v : vals) s += v;
    return s;
}

}  // namespace bodyflow
