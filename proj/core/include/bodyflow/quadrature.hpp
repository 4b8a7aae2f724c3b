// bodyflow -- planar incompressible flow with a moving rigid body.
//
// Distributed under the terms of the Apache License, Version 2.0.
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <map>
#include <vector>

#include "bodyflow/geometry.hpp"

namespace bodyflow {

/// Uniform background grid over the domain bounding box with per-cell area
/// weights. Interior cells carry the full cell area; cells cut by a boundary
/// carry a subsampled coverage estimate (first order). The wall coverage is
/// computed once; the solid is re-masked per placement.
class MaskedGrid {
public:
    static MaskedGrid build(const DomainGeometry& domain, int resolution, int subsamples = 8);

    /// Re-masks against a placed solid (nullptr removes the solid mask).
    void set_body(const ClosedCurve* placed_body);

    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double cell_size() const { return h_; }
    Vec2 center(int i, int j) const {
        return origin_ + Vec2((i + 0.5) * h_, (j + 0.5) * h_);
    }

    struct Cell {
        Vec2 x;    ///< evaluation point; cut cells use a fluid-side representative
        double w;  ///< area weight
    };
    const std::vector<Cell>& cells() const { return active_; }
    double area() const;

    /// Deterministic parallel quadrature: f is evaluated in parallel, the
    /// reduction runs in cell order.
    double integrate(const std::function<double(const Vec2&)>& f) const;

private:
    int nx_ = 0, ny_ = 0, subsamples_ = 8;
    double h_ = 0.0;
    Vec2 origin_{0.0, 0.0};
    std::vector<double> wall_cov_;   ///< static container coverage per cell
    std::vector<Vec2> eval_point_;   ///< wall-adjusted evaluation points
    std::vector<double> weight_;     ///< current weights (wall minus body)
    std::map<std::size_t, Vec2> body_eval_;  ///< cut-cell overrides near the solid
    std::vector<Cell> active_;
    const DomainGeometry* domain_ = nullptr;

    void rebuild_active();
};

}  // namespace bodyflow
