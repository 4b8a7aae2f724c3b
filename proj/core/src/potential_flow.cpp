#include "bodyflow/potential_flow.hpp"

#include <cmath>
#include <stdexcept>

#include "bodyflow/parallel.hpp"
#include "panel_kernels.hpp"

namespace bodyflow {

using kernels::point_source_gradient;
using kernels::point_source_velocity;
using kernels::point_vortex_gradient;
using kernels::point_vortex_velocity;
using kernels::source_sheet_gradient;
using kernels::source_sheet_potential;
using kernels::source_sheet_velocity;
using kernels::vortex_sheet_gradient;
using kernels::vortex_sheet_velocity;

double VorticityField::sum_abs_strength() const {
    double s = 0.0;
    for (const VortexParticle& p : particles) s += std::abs(p.strength);
    return s;
}

Vec2 blob_velocity(const Vec2& center, double strength, double eps, const Vec2& x) {
    const Vec2 d = x - center;
    return strength / (2.0 * M_PI) * perp(d) / (d.squaredNorm() + eps * eps);
}

Mat2 blob_velocity_gradient(const Vec2& center, double strength, double eps, const Vec2& x) {
    const Vec2 d = x - center;
    const double den = d.squaredNorm() + eps * eps;
    const double c = strength / (2.0 * M_PI);
    Mat2 j;
    const double dx = d.x(), dy = d.y();
    j(0, 0) = 2.0 * c * dx * dy / (den * den);
    j(0, 1) = -c * (den - 2.0 * dy * dy) / (den * den);
    j(1, 0) = c * (den - 2.0 * dx * dx) / (den * den);
    j(1, 1) = -2.0 * c * dx * dy / (den * den);
    return j;
}

namespace {

struct FlatPanels {
    std::vector<const Panel*> panels;
    std::vector<int> loop_of;
    std::vector<int> index_in_loop;
};

FlatPanels flatten(const PanelSystem& ps) {
    FlatPanels f;
    for (std::size_t li = 0; li < ps.loops.size(); ++li) {
        const auto& loop = ps.loops[li].panels;
        for (std::size_t pi = 0; pi < loop.size(); ++pi) {
            f.panels.push_back(&loop[pi]);
            f.loop_of.push_back(static_cast<int>(li));
            f.index_in_loop.push_back(static_cast<int>(pi));
        }
    }
    return f;
}

Vec2 blob_sum(const std::vector<VortexParticle>& particles, double eps, const Vec2& x) {
    Vec2 u(0.0, 0.0);
    for (const VortexParticle& p : particles) u += blob_velocity(p.x, p.strength, eps, x);
    return u;
}

}  // namespace

FlowSolution solve_flow(const VorticityField& omega, const RigidState& state,
                        std::shared_ptr<const PanelSystem> panels, FlowSolveDebug* debug) {
    const PanelSystem& ps = *panels;
    const FlatPanels flat = flatten(ps);
    const int n = static_cast<int>(flat.panels.size());
    const int cycles = ps.cycles();
    if (static_cast<int>(omega.gamma_holes.size()) != static_cast<int>(ps.hole_interiors.size())) {
        throw std::invalid_argument("solve_flow: circulation count does not match holes");
    }

    // Cycle anchors: one point vortex inside the body and inside each hole,
    // plus one compatibility point source inside the body (or first hole).
    std::vector<Vec2> anchors;
    if (ps.has_body) anchors.push_back(ps.body_interior);
    for (const Vec2& c : ps.hole_interiors) anchors.push_back(c);
    const bool with_source = cycles > 0;
    const Vec2 source_pos = with_source ? anchors.front() : Vec2(0.0, 0.0);

    const int dim = n + cycles + (with_source ? 1 : 0);
    const int rows = n + cycles + 1;  // + outer sheet normalization
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows, dim);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(rows);

    // Which cycle (if any) each loop's circulation row belongs to.
    std::vector<int> cycle_of_loop(ps.loops.size(), -1);
    {
        int c = 0;
        for (std::size_t li = 0; li < ps.loops.size(); ++li) {
            if (ps.loops[li].role != LoopRole::Outer) cycle_of_loop[li] = c++;
        }
    }

    // Blob-induced velocity at all collocation points.
    std::vector<Vec2> ublob(n);
    parallel_for(n, [&](std::size_t p) {
        ublob[p] = blob_sum(omega.particles, omega.eps_blob, flat.panels[p]->mid);
    });

    // Collocation rows: the sheets are SOURCE layers (second kind, no
    // interior-flow gauge), the circulations ride on the cycle vortices.
    parallel_for(n, [&](std::size_t p) {
        const Panel& tgt = *flat.panels[p];
        for (int q = 0; q < n; ++q) {
            a(p, q) = tgt.normal.dot(source_sheet_velocity(*flat.panels[q], tgt.mid));
        }
        a(p, p) = -0.5;  // fluid-side normal jump of the own source sheet
        for (int c = 0; c < cycles; ++c) {
            a(p, n + c) = tgt.normal.dot(point_vortex_velocity(anchors[c], 1.0, tgt.mid));
        }
        if (with_source) {
            a(p, n + cycles) = tgt.normal.dot(point_source_velocity(source_pos, 1.0, tgt.mid));
        }
        const bool on_body = ps.has_body && flat.loop_of[p] == 0;
        const double data = on_body ? solid_velocity(state, tgt.mid).dot(tgt.normal) : 0.0;
        b(p) = data - tgt.normal.dot(ublob[p]);
    });

    // Circulation rows: counterclockwise quadrature of the fluid-side
    // tangential velocity around each cycle loop (source sheets jump only in
    // the normal component).
    for (int p = 0; p < n; ++p) {
        const int li = flat.loop_of[p];
        const int cyc = cycle_of_loop[li];
        if (cyc < 0) continue;
        const Panel& tgt = *flat.panels[p];
        const double w = ps.loops[li].ccw_sign * tgt.len;
        const int row = n + cyc;
        for (int q = 0; q < n; ++q) {
            a(row, q) += w * tgt.tangent.dot(source_sheet_velocity(*flat.panels[q], tgt.mid));
        }
        for (int c = 0; c < cycles; ++c) {
            a(row, n + c) += w * tgt.tangent.dot(point_vortex_velocity(anchors[c], 1.0, tgt.mid));
        }
        if (with_source) {
            a(row, n + cycles) += w * tgt.tangent.dot(point_source_velocity(source_pos, 1.0, tgt.mid));
        }
        b(row) -= w * tgt.tangent.dot(ublob[p]);
    }
    {
        int c = 0;
        if (ps.has_body) b(n + c++) += omega.gamma_body;
        for (double g : omega.gamma_holes) b(n + c++) += g;
    }

    // Outer normalization: the outer constant sheet mode induces nothing in
    // the fluid, pin its total strength to zero.
    for (int p = 0; p < n; ++p) {
        if (ps.loops[flat.loop_of[p]].role == LoopRole::Outer) {
            a(n + cycles, p) = flat.panels[p]->len;
        }
    }

    // The cycle vortices and the constant sheet mode of their own loop carry
    // the same far field, so symmetric placements make the square system
    // rank deficient. The minimum-norm solution zeroes that null content.
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    Eigen::VectorXd sol = cod.solve(b);

    if (debug) {
        debug->matrix = a;
        debug->rhs = b;
        debug->solution = sol;
    }

    FlowSolution fs;
    fs.ps_ = panels;
    fs.particles_ = omega.particles;
    fs.eps_ = omega.eps_blob;
    fs.sigma_.resize(ps.loops.size());
    for (std::size_t li = 0; li < ps.loops.size(); ++li) {
        fs.sigma_[li].resize(ps.loops[li].panels.size());
    }
    for (int p = 0; p < n; ++p) fs.sigma_[flat.loop_of[p]][flat.index_in_loop[p]] = sol(p);
    fs.kappa_.assign(cycles, 0.0);
    fs.kappa_pos_ = anchors;
    for (int c = 0; c < cycles; ++c) fs.kappa_[c] = sol(n + c);
    fs.source_q_ = with_source ? sol(n + cycles) : 0.0;
    fs.source_pos_ = source_pos;
    fs.gamma_.clear();
    if (ps.has_body) fs.gamma_.push_back(omega.gamma_body);
    for (double g : omega.gamma_holes) fs.gamma_.push_back(g);
    fs.bc_data_.resize(n);
    for (int p = 0; p < n; ++p) {
        const bool on_body = ps.has_body && flat.loop_of[p] == 0;
        fs.bc_data_[p] =
            on_body ? solid_velocity(state, flat.panels[p]->mid).dot(flat.panels[p]->normal) : 0.0;
    }
    return fs;
}

Vec2 FlowSolution::velocity(const Vec2& x, bool fast) const {
    Vec2 u = blob_sum(particles_, eps_, x);
    for (std::size_t li = 0; li < ps_->loops.size(); ++li) {
        const auto& loop = ps_->loops[li].panels;
        for (std::size_t q = 0; q < loop.size(); ++q) {
            u += sigma_[li][q] * (fast ? kernels::source_sheet_velocity_fast(loop[q], x)
                                       : source_sheet_velocity(loop[q], x));
        }
    }
    for (std::size_t c = 0; c < kappa_.size(); ++c) {
        u += point_vortex_velocity(kappa_pos_[c], kappa_[c], x);
    }
    if (source_q_ != 0.0) u += point_source_velocity(source_pos_, source_q_, x);
    return u;
}

Mat2 FlowSolution::velocity_gradient(const Vec2& x) const {
    Mat2 j = Mat2::Zero();
    for (const VortexParticle& p : particles_) {
        j += blob_velocity_gradient(p.x, p.strength, eps_, x);
    }
    for (std::size_t li = 0; li < ps_->loops.size(); ++li) {
        const auto& loop = ps_->loops[li].panels;
        for (std::size_t q = 0; q < loop.size(); ++q) {
            j += sigma_[li][q] * source_sheet_gradient(loop[q], x);
        }
    }
    for (std::size_t c = 0; c < kappa_.size(); ++c) {
        j += point_vortex_gradient(kappa_pos_[c], kappa_[c], x);
    }
    if (source_q_ != 0.0) j += point_source_gradient(source_pos_, source_q_, x);
    return j;
}

Vec2 FlowSolution::boundary_velocity(int loop, int panel) const {
    const Panel& p = ps_->loops[loop].panels[panel];
    // Principal value of everything (the own panel contributes zero) plus the
    // fluid-side normal jump; the fluid sits on the +perp(tangent) side.
    return velocity(p.mid) - 0.5 * sigma_[loop][panel] * p.normal;
}

double FlowSolution::circulation(int cycle) const {
    int c = 0;
    for (std::size_t li = 0; li < ps_->loops.size(); ++li) {
        if (ps_->loops[li].role == LoopRole::Outer) continue;
        if (c++ != cycle) continue;
        const auto& loop = ps_->loops[li];
        double circ = 0.0;
        for (std::size_t q = 0; q < loop.panels.size(); ++q) {
            circ += loop.panels[q].len *
                    loop.panels[q].tangent.dot(boundary_velocity(static_cast<int>(li), q));
        }
        return loop.ccw_sign * circ;
    }
    throw std::out_of_range("circulation: no such cycle");
}

double FlowSolution::max_bc_residual() const {
    double worst = 0.0;
    int flat_index = 0;
    for (std::size_t li = 0; li < ps_->loops.size(); ++li) {
        const auto& loop = ps_->loops[li].panels;
        for (std::size_t q = 0; q < loop.size(); ++q, ++flat_index) {
            const double un = boundary_velocity(static_cast<int>(li), static_cast<int>(q))
                                  .dot(loop[q].normal);
            worst = std::max(worst, std::abs(un - bc_data_[flat_index]));
        }
    }
    return worst;
}

double FlowSolution::sheet_strength(int loop, int panel) const { return sigma_[loop][panel]; }

std::vector<FlowSolution> harmonic_fields(std::shared_ptr<const PanelSystem> panels) {
    std::vector<FlowSolution> fields;
    const int cycles = panels->cycles();
    for (int c = 0; c < cycles; ++c) {
        VorticityField unit;
        unit.gamma_holes.assign(panels->hole_interiors.size(), 0.0);
        int k = 0;
        if (panels->has_body) {
            if (c == k++) unit.gamma_body = 1.0;
        }
        for (std::size_t h = 0; h < unit.gamma_holes.size(); ++h) {
            if (c == k++) unit.gamma_holes[h] = 1.0;
        }
        fields.push_back(solve_flow(unit, RigidState{}, panels));
    }
    return fields;
}

KirchhoffSet solve_kirchhoff(const RigidState& state, std::shared_ptr<const PanelSystem> panels) {
    const PanelSystem& ps = *panels;
    if (!ps.has_body) throw std::invalid_argument("solve_kirchhoff: no body in the panel system");
    const FlatPanels flat = flatten(ps);
    const int n = static_cast<int>(flat.panels.size());

    Eigen::MatrixXd a(n, n);
    parallel_for(n, [&](std::size_t p) {
        const Panel& tgt = *flat.panels[p];
        for (int q = 0; q < n; ++q) {
            a(p, q) = tgt.normal.dot(source_sheet_velocity(*flat.panels[q], tgt.mid));
        }
        a(p, p) = -0.5;  // fluid-side normal jump of the own source sheet
    });

    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n, 3);
    const int nb = static_cast<int>(ps.body().panels.size());
    for (int p = 0; p < nb; ++p) {
        const Panel& pnl = ps.body().panels[p];
        rhs(p, 0) = pnl.normal.x();
        rhs(p, 1) = pnl.normal.y();
        rhs(p, 2) = perp(pnl.mid - state.h).dot(pnl.normal);
    }
    // Neumann compatibility: the data must integrate to zero on the body.
    for (int i = 0; i < 3; ++i) {
        double s = 0.0, scale = 0.0;
        for (int p = 0; p < nb; ++p) {
            s += rhs(p, i) * ps.body().panels[p].len;
            scale += std::abs(rhs(p, i)) * ps.body().panels[p].len;
        }
        if (std::abs(s) > 1e-9 * (scale + ps.body().perimeter())) {
            throw std::runtime_error("solve_kirchhoff: Neumann data fails compatibility");
        }
    }

    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(a);
    Eigen::MatrixXd sol = cod.solve(rhs);

    KirchhoffSet ks;
    ks.ps_ = panels;
    ks.lambda_.assign(3, std::vector<double>(n, 0.0));
    for (int i = 0; i < 3; ++i) {
        for (int q = 0; q < n; ++q) ks.lambda_[i][q] = sol(q, i);
    }
    ks.k_data_.assign(3, std::vector<double>(nb, 0.0));
    for (int i = 0; i < 3; ++i) {
        for (int p = 0; p < nb; ++p) ks.k_data_[i][p] = rhs(p, i);
    }
    // Zero-mean normalization of the potentials on the body.
    ks.body_phi_.assign(3, std::vector<double>(nb, 0.0));
    for (int i = 0; i < 3; ++i) {
        ks.phi_offset_[i] = 0.0;
        double num = 0.0, den = 0.0;
        for (int p = 0; p < nb; ++p) {
            const double phi = ks.potential(i, ps.body().panels[p].mid);
            ks.body_phi_[i][p] = phi;
            num += phi * ps.body().panels[p].len;
            den += ps.body().panels[p].len;
        }
        ks.phi_offset_[i] = num / den;
        for (int p = 0; p < nb; ++p) ks.body_phi_[i][p] -= ks.phi_offset_[i];
    }
    return ks;
}

double KirchhoffSet::potential(int i, const Vec2& x) const {
    double phi = 0.0;
    int q = 0;
    for (const BoundaryLoop& loop : ps_->loops) {
        for (const Panel& p : loop.panels) phi += lambda_[i][q++] * source_sheet_potential(p, x);
    }
    return phi - phi_offset_[i];
}

Vec2 KirchhoffSet::grad(int i, const Vec2& x) const {
    Vec2 g(0.0, 0.0);
    int q = 0;
    for (const BoundaryLoop& loop : ps_->loops) {
        for (const Panel& p : loop.panels) g += lambda_[i][q++] * source_sheet_velocity(p, x);
    }
    return g;
}

void KirchhoffSet::grads(const Vec2& x, Vec2 out[3], bool fast) const {
    out[0] = out[1] = out[2] = Vec2(0.0, 0.0);
    int q = 0;
    for (const BoundaryLoop& loop : ps_->loops) {
        for (const Panel& p : loop.panels) {
            const Vec2 k = fast ? kernels::source_sheet_velocity_fast(p, x)
                                : source_sheet_velocity(p, x);
            out[0] += lambda_[0][q] * k;
            out[1] += lambda_[1][q] * k;
            out[2] += lambda_[2][q] * k;
            ++q;
        }
    }
}

Vec2 KirchhoffSet::body_grad(int i, int panel) const {
    const Panel& p = ps_->body().panels[panel];
    // Principal value plus the fluid-side normal jump of the own sheet.
    return grad(i, p.mid) - 0.5 * lambda_[i][panel] * p.normal;
}

AddedMass added_mass(const KirchhoffSet& kirchhoff, double mass, double inertia) {
    const PanelSystem& ps = kirchhoff.panels();
    const int nb = static_cast<int>(ps.body().panels.size());
    Mat3 raw = Mat3::Zero();
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double s = 0.0;
            for (int p = 0; p < nb; ++p) {
                s += kirchhoff.body_potential(i, p) * kirchhoff.neumann_data(j, p) *
                     ps.body().panels[p].len;
            }
            raw(i, j) = s;
        }
    }
    AddedMass am;
    am.fluid = 0.5 * (raw + raw.transpose());
    const double scale = std::max(am.fluid.norm(), 1e-12);
    am.asymmetry = (raw - raw.transpose()).norm() / scale;
    const double h = ps.mean_body_panel_length();
    const double body_scale = ps.body().perimeter() / (2.0 * M_PI);
    if (am.asymmetry > std::max(1e-6, 50.0 * (h / body_scale) * (h / body_scale))) {
        throw std::runtime_error("added_mass: boundary quadrature asymmetry beyond tolerance");
    }
    Eigen::SelfAdjointEigenSolver<Mat3> eig(am.fluid);
    if (eig.eigenvalues().minCoeff() < -1e-8 * scale) {
        throw std::runtime_error("added_mass: fluid matrix is not positive semidefinite");
    }
    am.body = Mat3::Zero();
    am.body(0, 0) = mass;
    am.body(1, 1) = mass;
    am.body(2, 2) = inertia;
    am.total = am.body + am.fluid;
    return am;
}

}  // namespace bodyflow
