/// @file test_rigid_motion.cpp
/// Planar rigid transforms: exp/log round trips, the screw-flow definition of
/// the exponential checked against direct ODE integration, and trajectory
/// rigidity.

#include <doctest.h>

#include <random>

#include "bodyflow/rigid_motion.hpp"
#include "oracles.hpp"

using namespace bodyflow;

TEST_SUITE_BEGIN("rigid_motion");

TEST_CASE("exp of a pure translation") {
    const RigidMotion tau = se2_exp(Vec2(0.7, -0.3), 0.0);
    CHECK(tau.angle() == doctest::Approx(0.0));
    const Vec2 y = tau(Vec2(1.0, 2.0));
    CHECK(y.x() == doctest::Approx(1.7));
    CHECK(y.y() == doctest::Approx(1.7));
}

TEST_CASE("exp of a pure rotation spins about the origin") {
    const RigidMotion tau = se2_exp(Vec2(0.0, 0.0), 0.4);
    CHECK(tau(Vec2(0.0, 0.0)).norm() == doctest::Approx(0.0));
    const Vec2 y = tau(Vec2(1.0, 0.0));
    CHECK(y.x() == doctest::Approx(std::cos(0.4)));
    CHECK(y.y() == doctest::Approx(std::sin(0.4)));
}

TEST_CASE("exp matches RK4 integration of the screw flow") {
    // The defining flow: d/dt tau(t,x) = l + r (tau(t,x) - t l)^perp.
    const Vec2 l(1.0, 0.0);
    const double r = 0.3;
    const RigidMotion tau = se2_exp(l, r);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(-2.0, 2.0);
    for (int k = 0; k < 10; ++k) {
        const Vec2 x0(pos(rng), pos(rng));
        auto f = [&](double t, const std::vector<double>& y) {
            const Vec2 p(y[0], y[1]);
            const Vec2 v = l + r * perp(p - t * l);
            return std::vector<double>{v.x(), v.y()};
        };
        const auto coarse = oracles::rk4(f, {x0.x(), x0.y()}, 0.0, 1.0, 64);
        const auto fine = oracles::rk4(f, {x0.x(), x0.y()}, 0.0, 1.0, 128);
        // Step halving agreement pins the oracle itself.
        CHECK(std::abs(coarse[0] - fine[0]) < 1e-10);
        const Vec2 y = tau(x0);
        CHECK(y.x() == doctest::Approx(fine[0]).epsilon(1e-10));
        CHECK(y.y() == doctest::Approx(fine[1]).epsilon(1e-10));
    }
}

TEST_CASE("log of the identity and of a pure rotation") {
    const Twist id = se2_log(RigidMotion());
    CHECK(id.l.norm() == doctest::Approx(0.0));
    CHECK(id.r == doctest::Approx(0.0));
    const Twist rot = se2_log(se2_exp(Vec2(0.0, 0.0), 0.2));
    CHECK(rot.l.norm() == doctest::Approx(0.0));
    CHECK(rot.r == doctest::Approx(0.2));
}

TEST_CASE("log rejects half-turn rotations") {
    CHECK_THROWS_AS(se2_log(RigidMotion(M_PI, Vec2(0.0, 0.0))), std::domain_error);
}

TEST_CASE("exp/log round trip on random motions") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-M_PI / 2.0, M_PI / 2.0);
    std::uniform_real_distribution<double> shift(-1.0, 1.0);
    for (int k = 0; k < 50; ++k) {
        const RigidMotion tau(angle(rng), Vec2(shift(rng), shift(rng)));
        const Twist xi = se2_log(tau);
        const RigidMotion back = se2_exp(xi.l, xi.r);
        CHECK(back.distance_to(tau) < 1e-10);
    }
}

TEST_CASE("group laws compose and invert") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const RigidMotion a(val(rng), Vec2(val(rng), val(rng)));
        const RigidMotion b(val(rng), Vec2(val(rng), val(rng)));
        const Vec2 x(val(rng), val(rng));
        CHECK((a.compose(b)(x) - a(b(x))).norm() < 1e-12);
        CHECK((a.compose(a.inverse())(x) - x).norm() < 1e-12);
    }
}

TEST_CASE("constant velocity advance") {
    RigidState s;
    s.l = Vec2(1.0, 0.0);
    s = advance_rigid(s, Vec2(0.0, 0.0), 0.0, 0.1);
    CHECK(s.h.x() == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(s.h.y() == doctest::Approx(0.0));
}

TEST_CASE("uniform acceleration from rest over many steps") {
    RigidState s;
    const int n = 1000;
    for (int k = 0; k < n; ++k) s = advance_rigid(s, Vec2(1.0, 0.0), 0.0, 1.0 / n);
    CHECK(std::abs(s.l.x() - 1.0) < 1e-8);
    CHECK(std::abs(s.h.x() - 0.5) < 1e-8);
}

TEST_CASE("constant spin reaches pi at t = pi") {
    RigidState s;
    s.r = 1.0;
    const int n = 100;
    for (int k = 0; k < n; ++k) s = advance_rigid(s, Vec2(0.0, 0.0), 0.0, M_PI / n);
    CHECK(std::abs(s.theta - M_PI) < 1e-10);
}

TEST_CASE("solid velocity field") {
    RigidState s;
    s.r = 1.0;
    CHECK((solid_velocity(s, Vec2(1.0, 0.0)) - Vec2(0.0, 1.0)).norm() < 1e-15);
    s.r = 0.0;
    s.l = Vec2(2.0, 0.0);
    CHECK((solid_velocity(s, Vec2(0.3, -0.7)) - Vec2(2.0, 0.0)).norm() < 1e-15);
    s.r = 0.8;
    s.h = Vec2(0.5, 0.5);
    CHECK((solid_velocity(s, s.h) - s.l).norm() == doctest::Approx(0.0));
}

TEST_CASE("rigid trajectories preserve pairwise distances") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> val(-1.0, 1.0);
    RigidState s;
    s.l = Vec2(0.3, -0.2);
    s.r = 0.7;
    const Vec2 p0(val(rng), val(rng)), q0(val(rng), val(rng));
    const double d0 = (p0 - q0).norm();
    RigidState cur = s;
    for (int k = 0; k < 200; ++k) cur = advance_rigid(cur, Vec2(0.1, 0.05), -0.02, 0.005);
    const RigidMotion g = placement(cur, Vec2(0.0, 0.0));
    CHECK(std::abs((g(p0) - g(q0)).norm() - d0) < 1e-10);
}

TEST_SUITE_END();
