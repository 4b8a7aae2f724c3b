#include "bodyflow/ns_sim.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <Eigen/SparseCore>

namespace bodyflow {

namespace {
constexpr double kNu = 1.0;  // the systems are normalized to unit viscosity
}

NsSim::NsSim(DomainGeometry domain, std::optional<SolidShape> solid, RigidState initial,
             const StreamFn& initial_stream, NsParams params)
    : domain_(std::move(domain)), solid_(std::move(solid)), solid_state_(initial),
      params_(params), periodic_(params.periodic) {
    Vec2 lo, hi;
    domain_.bounding_box(lo, hi);
    const Vec2 ext = hi - lo;
    const double span = std::max(ext.x(), ext.y());
    const double pad = 2.0 * span / params_.grid;
    h_ = (span + 2.0 * pad) / params_.grid;
    origin_ = lo - Vec2(pad, pad);
    nx_ = static_cast<int>(std::ceil((ext.x() + 2.0 * pad) / h_));
    ny_ = static_cast<int>(std::ceil((ext.y() + 2.0 * pad) / h_));

    u_.assign((nx_ + 1) * ny_, 0.0);
    v_.assign(nx_ * (ny_ + 1), 0.0);
    rho_.assign(nx_ * ny_, 1.0);
    cell_solid_.assign(nx_ * ny_, 0);
    uface_solid_.assign(u_.size(), 0);
    vface_solid_.assign(v_.size(), 0);
    pressure_.assign(nx_ * ny_, 0.0);

    uface_open_.assign(u_.size(), 0.0);
    vface_open_.assign(v_.size(), 0.0);
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i <= nx_; ++i) {
            const Vec2 x = origin_ + Vec2(i * h_, (j + 0.5) * h_);
            uface_open_[ui(i, j)] = domain_.contains(x) ? 1.0 : 0.0;
        }
    }
    for (int j = 0; j <= ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const Vec2 x = origin_ + Vec2((i + 0.5) * h_, j * h_);
            vface_open_[vi(i, j)] = domain_.contains(x) ? 1.0 : 0.0;
        }
    }

    dt_ = params_.dt > 0.0 ? params_.dt : 0.225 * h_ * h_ / kNu;
    build_poisson();
    rebuild_solid_masks();
    apply_initial_stream(initial_stream);

    // Consistent start: rigid inside the solid, penalized, divergence free.
    if (solid_) {
        for (int j = 0; j < ny_; ++j) {
            for (int i = 0; i <= nx_; ++i) {
                if (uface_solid_[ui(i, j)]) {
                    const Vec2 x = origin_ + Vec2(i * h_, (j + 0.5) * h_);
                    u_[ui(i, j)] = solid_velocity(solid_state_, x).x();
                }
            }
        }
        for (int j = 0; j <= ny_; ++j) {
            for (int i = 0; i < nx_; ++i) {
                if (vface_solid_[vi(i, j)]) {
                    const Vec2 x = origin_ + Vec2((i + 0.5) * h_, j * h_);
                    v_[vi(i, j)] = solid_velocity(solid_state_, x).y();
                }
            }
        }
    }
    if (!periodic_) penalize();
    project();
    if (solid_) rigid_project();
    energy0_ = kinetic_energy();
    diss_rate_prev_ = dissipation_rate();
}

NsSim NsSim::periodic_box(double box_size, int grid, const StreamFn& initial_stream,
                          double t_end) {
    // A square container is supplied only to size the box; all masks are open.
    NsParams p;
    p.grid = grid;
    p.t_end = t_end;
    p.periodic = true;
    DomainGeometry dom;
    dom.outer.points = {Vec2(0.0, 0.0), Vec2(box_size, 0.0), Vec2(box_size, box_size),
                        Vec2(0.0, box_size)};
    NsSim sim(std::move(dom), std::nullopt, RigidState{}, nullptr, p);
    sim.origin_ = Vec2(0.0, 0.0);
    sim.h_ = box_size / grid;
    sim.nx_ = grid;
    sim.ny_ = grid;
    sim.u_.assign((grid + 1) * grid, 0.0);
    sim.v_.assign(grid * (grid + 1), 0.0);
    sim.rho_.assign(grid * grid, 1.0);
    sim.cell_solid_.assign(grid * grid, 0);
    sim.uface_solid_.assign(sim.u_.size(), 0);
    sim.vface_solid_.assign(sim.v_.size(), 0);
    sim.pressure_.assign(grid * grid, 0.0);
    sim.uface_open_.assign(sim.u_.size(), 1.0);
    sim.vface_open_.assign(sim.v_.size(), 1.0);
    sim.dt_ = 0.225 * sim.h_ * sim.h_ / kNu;
    sim.build_poisson();
    sim.apply_initial_stream(initial_stream);
    sim.project();
    sim.energy0_ = sim.kinetic_energy();
    sim.diss_rate_prev_ = sim.dissipation_rate();
    return sim;
}

void NsSim::apply_initial_stream(const StreamFn& stream) {
    if (!stream) return;
    // u = -d psi / dy, v = d psi / dx from corner samples keeps the discrete
    // divergence identically zero.
    auto psi = [&](int i, int j) { return stream(origin_ + Vec2(i * h_, j * h_)); };
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i <= nx_; ++i) u_[ui(i, j)] = -(psi(i, j + 1) - psi(i, j)) / h_;
    }
    for (int j = 0; j <= ny_; ++j) {
        for (int i = 0; i < nx_; ++i) v_[vi(i, j)] = (psi(i + 1, j) - psi(i, j)) / h_;
    }
    if (periodic_) {
        for (int j = 0; j < ny_; ++j) u_[ui(nx_, j)] = u_[ui(0, j)];
        for (int i = 0; i < nx_; ++i) v_[vi(i, ny_)] = v_[vi(i, 0)];
    }
}

void NsSim::build_poisson() {
    const int n = nx_ * ny_;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(5 * n);
    const double w = 1.0 / (h_ * h_);
    auto cell = [&](int i, int j) {
        if (periodic_) return ci((i + nx_) % nx_, (j + ny_) % ny_);
        if (i < 0 || i >= nx_ || j < 0 || j >= ny_) return -1;
        return ci(i, j);
    };
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const int k = ci(i, j);
            double diag = 0.0;
            const int nbs[4] = {cell(i - 1, j), cell(i + 1, j), cell(i, j - 1), cell(i, j + 1)};
            for (int nb : nbs) {
                if (nb >= 0) {
                    diag += w;
                    trip.emplace_back(k, nb, -w);
                }
            }
            trip.emplace_back(k, k, diag + (k == 0 ? 1.0 : 0.0));  // pin the constant
        }
    }
    Eigen::SparseMatrix<double> a(n, n);
    a.setFromTriplets(trip.begin(), trip.end());
    poisson_ = std::make_unique<Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>>>();
    poisson_->compute(a);
    if (poisson_->info() != Eigen::Success) {
        throw std::runtime_error("ns_sim: Poisson factorization failed");
    }
}

ClosedCurve NsSim::placed_solid() const {
    return solid_->boundary.transformed(placement(solid_state_, Vec2(0.0, 0.0)));
}

void NsSim::rebuild_solid_masks() {
    std::fill(cell_solid_.begin(), cell_solid_.end(), 0);
    std::fill(uface_solid_.begin(), uface_solid_.end(), 0);
    std::fill(vface_solid_.begin(), vface_solid_.end(), 0);
    std::fill(rho_.begin(), rho_.end(), 1.0);
    if (!solid_) return;
    const ClosedCurve body = placed_solid();
    Vec2 lo(1e300, 1e300), hi(-1e300, -1e300);
    for (const Vec2& p : body.points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    const int i0 = std::max(0, static_cast<int>((lo.x() - origin_.x()) / h_) - 2);
    const int i1 = std::min(nx_, static_cast<int>((hi.x() - origin_.x()) / h_) + 2);
    const int j0 = std::max(0, static_cast<int>((lo.y() - origin_.y()) / h_) - 2);
    const int j1 = std::min(ny_, static_cast<int>((hi.y() - origin_.y()) / h_) + 2);
    for (int j = j0; j < std::min(j1, ny_); ++j) {
        for (int i = i0; i < std::min(i1, nx_); ++i) {
            const Vec2 x = origin_ + Vec2((i + 0.5) * h_, (j + 0.5) * h_);
            if (body.contains(x)) {
                cell_solid_[ci(i, j)] = 1;
                rho_[ci(i, j)] = solid_->density;
            }
        }
    }
    for (int j = j0; j < std::min(j1, ny_); ++j) {
        for (int i = i0; i <= std::min(i1, nx_); ++i) {
            const Vec2 x = origin_ + Vec2(i * h_, (j + 0.5) * h_);
            if (body.contains(x)) uface_solid_[ui(i, j)] = 1;
        }
    }
    for (int j = j0; j <= std::min(j1, ny_); ++j) {
        for (int i = i0; i < std::min(i1, nx_); ++i) {
            const Vec2 x = origin_ + Vec2((i + 0.5) * h_, j * h_);
            if (body.contains(x)) vface_solid_[vi(i, j)] = 1;
        }
    }
}

void NsSim::advect_diffuse() {
    // Central divergence-form convection plus explicit diffusion on the MAC
    // layout; the diffusive dt limit keeps both stable at unit viscosity.
    std::vector<double> un = u_, vn = v_;
    auto uat = [&](int i, int j) -> double {
        if (periodic_) return u_[ui(((i % nx_) + nx_) % nx_, ((j % ny_) + ny_) % ny_)];
        if (i < 0 || i > nx_ || j < 0 || j >= ny_) return 0.0;
        return u_[ui(i, j)];
    };
    auto vat = [&](int i, int j) -> double {
        if (periodic_) return v_[vi(((i % nx_) + nx_) % nx_, ((j % ny_) + ny_) % ny_)];
        if (i < 0 || i >= nx_ || j < 0 || j > ny_) return 0.0;
        return v_[vi(i, j)];
    };

    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i <= nx_; ++i) {
            if (!periodic_ && (i == 0 || i == nx_)) {
                un[ui(i, j)] = 0.0;  // box faces stay closed
                continue;
            }
            // Flux form: d(uu)/dx at cell centers, d(uv)/dy at corners.
            const double ue = 0.5 * (uat(i, j) + uat(i + 1, j));
            const double uw = 0.5 * (uat(i - 1, j) + uat(i, j));
            const double fe = ue * ue, fw = uw * uw;
            const double vn_c = 0.5 * (vat(i - 1, j + 1) + vat(i, j + 1));
            const double vs_c = 0.5 * (vat(i - 1, j) + vat(i, j));
            const double un_c = 0.5 * (uat(i, j) + uat(i, j + 1));
            const double us_c = 0.5 * (uat(i, j - 1) + uat(i, j));
            const double conv = (fe - fw) / h_ + (vn_c * un_c - vs_c * us_c) / h_;
            const double lap = (uat(i + 1, j) + uat(i - 1, j) + uat(i, j + 1) + uat(i, j - 1) -
                                4.0 * uat(i, j)) /
                               (h_ * h_);
            un[ui(i, j)] = uat(i, j) + dt_ * (-conv + kNu * lap);
        }
    }
    for (int j = 0; j <= ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            if (!periodic_ && (j == 0 || j == ny_)) {
                vn[vi(i, j)] = 0.0;
                continue;
            }
            const double vn_f = 0.5 * (vat(i, j) + vat(i, j + 1));
            const double vs_f = 0.5 * (vat(i, j - 1) + vat(i, j));
            const double fn = vn_f * vn_f, fs = vs_f * vs_f;
            const double ue_c = 0.5 * (uat(i + 1, j - 1) + uat(i + 1, j));
            const double uw_c = 0.5 * (uat(i, j - 1) + uat(i, j));
            const double ve_c = 0.5 * (vat(i, j) + vat(i + 1, j));
            const double vw_c = 0.5 * (vat(i - 1, j) + vat(i, j));
            const double conv = (ue_c * ve_c - uw_c * vw_c) / h_ + (fn - fs) / h_;
            const double lap = (vat(i + 1, j) + vat(i - 1, j) + vat(i, j + 1) + vat(i, j - 1) -
                                4.0 * vat(i, j)) /
                               (h_ * h_);
            vn[vi(i, j)] = vat(i, j) + dt_ * (-conv + kNu * lap);
        }
    }
    u_.swap(un);
    v_.swap(vn);
    if (periodic_) {
        for (int j = 0; j < ny_; ++j) u_[ui(nx_, j)] = u_[ui(0, j)];
        for (int i = 0; i < nx_; ++i) v_[vi(i, ny_)] = v_[vi(i, 0)];
    }
}

void NsSim::penalize() {
    const double f = 1.0 / (1.0 + dt_ / params_.eta);
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i <= nx_; ++i) {
            if (uface_open_[ui(i, j)] == 0.0) u_[ui(i, j)] *= f;
        }
    }
    for (int j = 0; j <= ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            if (vface_open_[vi(i, j)] == 0.0) v_[vi(i, j)] *= f;
        }
    }
}

void NsSim::apply_gravity() {
    if (params_.gravity == 0.0 || !solid_) return;
    // Buoyancy-corrected acceleration on the solid faces: the fluid part of a
    // uniform gravity field is absorbed by hydrostatic pressure.
    const double g_eff = -params_.gravity * (solid_->density - 1.0) / solid_->density;
    for (int j = 0; j <= ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            if (vface_solid_[vi(i, j)]) v_[vi(i, j)] += dt_ * g_eff;
        }
    }
}

void NsSim::project() {
    const int n = nx_ * ny_;
    Eigen::VectorXd rhs(n);
    double mean = 0.0;
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const double div =
                (u_[ui(i + 1, j)] - u_[ui(i, j)] + v_[vi(i, j + 1)] - v_[vi(i, j)]) / h_;
            rhs(ci(i, j)) = -div / dt_;
            mean += rhs(ci(i, j));
        }
    }
    mean /= n;
    for (int k = 0; k < n; ++k) rhs(k) -= mean;
    const Eigen::VectorXd p = poisson_->solve(rhs);
    for (int k = 0; k < n; ++k) pressure_[k] = p(k);

    for (int j = 0; j < ny_; ++j) {
        for (int i = 1; i < nx_; ++i) {
            u_[ui(i, j)] -= dt_ * (p(ci(i, j)) - p(ci(i - 1, j))) / h_;
        }
        if (periodic_) {
            u_[ui(0, j)] -= dt_ * (p(ci(0, j)) - p(ci(nx_ - 1, j))) / h_;
            u_[ui(nx_, j)] = u_[ui(0, j)];
        }
    }
    for (int i = 0; i < nx_; ++i) {
        for (int j = 1; j < ny_; ++j) {
            v_[vi(i, j)] -= dt_ * (p(ci(i, j)) - p(ci(i, j - 1))) / h_;
        }
        if (periodic_) {
            v_[vi(i, 0)] -= dt_ * (p(ci(i, 0)) - p(ci(i, ny_ - 1))) / h_;
            v_[vi(i, ny_)] = v_[vi(i, 0)];
        }
    }
    last_div_ = max_divergence_now();
}

double NsSim::max_divergence_now() const {
    double worst = 0.0;
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const double div =
                (u_[ui(i + 1, j)] - u_[ui(i, j)] + v_[vi(i, j + 1)] - v_[vi(i, j)]) / h_;
            worst = std::max(worst, std::abs(div));
        }
    }
    return worst;
}

RigidProjection NsSim::rigid_project() {
    RigidProjection rp;
    if (!solid_) return rp;
    const Vec2 h0 = solid_state_.h;
    // Density-weighted least squares onto l + r (x - h)^perp over the solid
    // faces; an orthogonal projection, hence idempotent and non-expansive.
    Mat3 g = Mat3::Zero();
    Vec3 m = Vec3::Zero();
    const double w = solid_->density * h_ * h_;
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i <= nx_; ++i) {
            if (!uface_solid_[ui(i, j)]) continue;
            const Vec2 x = origin_ + Vec2(i * h_, (j + 0.5) * h_);
            const double by = -(x.y() - h0.y());  // x-component of (x-h)^perp
            g(0, 0) += w;
            g(0, 2) += w * by;
            g(2, 0) += w * by;
            g(2, 2) += w * by * by;
            m(0) += w * u_[ui(i, j)];
            m(2) += w * by * u_[ui(i, j)];
        }
    }
    for (int j = 0; j <= ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            if (!vface_solid_[vi(i, j)]) continue;
            const Vec2 x = origin_ + Vec2((i + 0.5) * h_, j * h_);
            const double bx = x.x() - h0.x();  // y-component of (x-h)^perp
            g(1, 1) += w;
            g(1, 2) += w * bx;
            g(2, 1) += w * bx;
            g(2, 2) += w * bx * bx;
            m(1) += w * v_[vi(i, j)];
            m(2) += w * bx * v_[vi(i, j)];
        }
    }
    if (g(0, 0) <= 0.0 || g(1, 1) <= 0.0 || g(2, 2) <= 0.0) {
        throw std::runtime_error("rigid projection: degenerate solid mask");
    }
    const Vec3 sol = g.ldlt().solve(m);
    rp.l = Vec2(sol(0), sol(1));
    rp.r = sol(2);
    rp.momentum_x = m(0);
    rp.momentum_y = m(1);
    rp.angular = m(2);
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i <= nx_; ++i) {
            if (!uface_solid_[ui(i, j)]) continue;
            const Vec2 x = origin_ + Vec2(i * h_, (j + 0.5) * h_);
            u_[ui(i, j)] = rp.l.x() - rp.r * (x.y() - h0.y());
        }
    }
    for (int j = 0; j <= ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            if (!vface_solid_[vi(i, j)]) continue;
            const Vec2 x = origin_ + Vec2((i + 0.5) * h_, j * h_);
            v_[vi(i, j)] = rp.l.y() + rp.r * (x.x() - h0.x());
        }
    }
    return rp;
}

double NsSim::collision_threshold() const {
    return params_.d_min > 0.0 ? params_.d_min : 2.0 * h_;
}

RunStatus NsSim::step() {
    advect_diffuse();
    if (!periodic_) penalize();
    apply_gravity();
    project();
    if (solid_) {
        const RigidProjection rp = rigid_project();
        solid_state_.l = rp.l;
        solid_state_.r = rp.r;
        solid_state_.h += dt_ * rp.l;
        solid_state_.theta += dt_ * rp.r;
        rebuild_solid_masks();
    }
    t_ += dt_;
    const double rate = dissipation_rate();
    diss_integral_ += 0.5 * dt_ * (rate + diss_rate_prev_);
    diss_rate_prev_ = rate;
    if (solid_) {
        const Clearance c = clearance(domain_, placed_solid());
        if (c.collision || c.distance <= collision_threshold()) return RunStatus::Collision;
    }
    return RunStatus::Completed;
}

double NsSim::kinetic_energy() const {
    double e = 0.0;
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const double uc = 0.5 * (u_[ui(i, j)] + u_[ui(i + 1, j)]);
            const double vc = 0.5 * (v_[vi(i, j)] + v_[vi(i, j + 1)]);
            e += 0.5 * rho_[ci(i, j)] * (uc * uc + vc * vc) * h_ * h_;
        }
    }
    return e;
}

double NsSim::dissipation_rate() const {
    // 2 int rho Du:Du with Du evaluated at cell centers.
    double s = 0.0;
    auto uat = [&](int i, int j) -> double {
        if (periodic_) return u_[ui(((i % nx_) + nx_) % nx_, ((j % ny_) + ny_) % ny_)];
        if (i < 0 || i > nx_ || j < 0 || j >= ny_) return 0.0;
        return u_[ui(i, j)];
    };
    auto vat = [&](int i, int j) -> double {
        if (periodic_) return v_[vi(((i % nx_) + nx_) % nx_, ((j % ny_) + ny_) % ny_)];
        if (i < 0 || i >= nx_ || j < 0 || j > ny_) return 0.0;
        return v_[vi(i, j)];
    };
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const double ux = (uat(i + 1, j) - uat(i, j)) / h_;
            const double vy = (vat(i, j + 1) - vat(i, j)) / h_;
            auto corner = [&](int ic, int jc) {
                const double uy = (uat(ic, jc) - uat(ic, jc - 1)) / h_;
                const double vx = (vat(ic, jc) - vat(ic - 1, jc)) / h_;
                return 0.5 * (uy + vx);
            };
            const double d12 = 0.25 * (corner(i, j) + corner(i + 1, j) + corner(i, j + 1) +
                                       corner(i + 1, j + 1));
            s += rho_[ci(i, j)] * (ux * ux + vy * vy + 2.0 * d12 * d12) * h_ * h_;
        }
    }
    return 2.0 * s;
}

namespace {

double mac_lerp(const std::vector<double>& f, int stride, int imax, int jmax, double gx,
                double gy) {
    const int i = std::clamp(static_cast<int>(std::floor(gx)), 0, imax - 1);
    const int j = std::clamp(static_cast<int>(std::floor(gy)), 0, jmax - 1);
    const double fx = std::clamp(gx - i, 0.0, 1.0);
    const double fy = std::clamp(gy - j, 0.0, 1.0);
    auto at = [&](int ii, int jj) { return f[jj * stride + ii]; };
    return (1 - fx) * (1 - fy) * at(i, j) + fx * (1 - fy) * at(i + 1, j) +
           (1 - fx) * fy * at(i, j + 1) + fx * fy * at(i + 1, j + 1);
}

}  // namespace

Vec2 NsFieldSample::velocity(const Vec2& x) const {
    const double ugx = (x.x() - origin.x()) / h;
    const double ugy = (x.y() - origin.y()) / h - 0.5;
    const double vgx = (x.x() - origin.x()) / h - 0.5;
    const double vgy = (x.y() - origin.y()) / h;
    return Vec2(mac_lerp(u, nx + 1, nx, ny - 1, ugx, ugy),
                mac_lerp(v, nx, nx - 1, ny, vgx, vgy));
}

Vec2 NsSim::sample_velocity(const Vec2& x) const {
    const double ugx = (x.x() - origin_.x()) / h_;
    const double ugy = (x.y() - origin_.y()) / h_ - 0.5;
    const double vgx = (x.x() - origin_.x()) / h_ - 0.5;
    const double vgy = (x.y() - origin_.y()) / h_;
    return Vec2(mac_lerp(u_, nx_ + 1, nx_, ny_ - 1, ugx, ugy),
                mac_lerp(v_, nx_, nx_ - 1, ny_, vgx, vgy));
}

NsFieldSample NsSim::field_sample() const {
    NsFieldSample s;
    s.origin = origin_;
    s.h = h_;
    s.nx = nx_;
    s.ny = ny_;
    s.u = u_;
    s.v = v_;
    return s;
}

NsMonitorRow NsSim::monitor_row() const {
    NsMonitorRow row;
    row.t = t_;
    row.solid = solid_state_;
    row.kinetic_energy = kinetic_energy();
    row.dissipation_integral = diss_integral_;
    row.energy_residual = row.kinetic_energy + diss_integral_ - energy0_;
    row.max_divergence = last_div_;
    if (solid_) {
        row.clearance = clearance(domain_, placed_solid()).distance;
        double sm = 0.0;
        for (int k = 0; k < nx_ * ny_; ++k) {
            if (cell_solid_[k]) sm += rho_[k] * h_ * h_;
        }
        row.solid_mass = sm;
    }
    return row;
}

NsSim::RunResult NsSim::run(int dump_every) {
    RunResult res;
    res.monitors.push_back(monitor_row());
    int k = 0;
    while (t_ < params_.t_end - 1e-12) {
        const RunStatus s = step();
        ++k;
        if (k % dump_every == 0 || s == RunStatus::Collision || t_ >= params_.t_end - 1e-12) {
            res.monitors.push_back(monitor_row());
        }
        if (s == RunStatus::Collision) {
            res.status = RunStatus::Collision;
            break;
        }
    }
    res.final_time = t_;
    return res;
}

void NsSim::write_snapshot(const std::string& path) const {
    std::ofstream out(path);
    out << nx_ << " " << ny_ << " " << h_ << " " << origin_.x() << " " << origin_.y() << "\n";
    char buf[128];
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const double uc = 0.5 * (u_[ui(i, j)] + u_[ui(i + 1, j)]);
            const double vc = 0.5 * (v_[vi(i, j)] + v_[vi(i, j + 1)]);
            std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g\n", uc, vc, rho_[ci(i, j)]);
            out << buf;
        }
    }
}

}  // namespace bodyflow
