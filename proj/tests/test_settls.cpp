#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "slexp/settls.hpp"

using namespace slexp;

namespace {

VelocityHistory sample_velocity(const PeriodicGrid1D& g, const std::function<double(double, double)>& v,
                                double t_now, double dt) {
    VelocityHistory h;
    h.v_now.resize(static_cast<std::size_t>(g.points));
    h.v_prev.resize(static_cast<std::size_t>(g.points));
    for (int i = 0; i < g.points; ++i) {
        h.v_now[static_cast<std::size_t>(i)] = v(t_now, g.node(i));
        h.v_prev[static_cast<std::size_t>(i)] = v(t_now - dt, g.node(i));
    }
    return h;
}

} // namespace

TEST_CASE("settls: constant velocity is exact after one iteration") {
    PeriodicGrid1D g(10.0, 128);
    const double v = 1.25, dt = 0.25;
    VelocityHistory hist;
    hist.v_now.assign(128, v);
    hist.v_prev.assign(128, v);
    auto traj = compute_departure_points(hist, g, dt);
    CHECK(traj.converged);
    CHECK(traj.iterations_used == 1);
    for (int j = 0; j < g.points; ++j) {
        CHECK(traj.x_dep[static_cast<std::size_t>(j)] ==
              doctest::Approx(g.wrap(g.node(j) - v * dt)).epsilon(1e-14));
        CHECK(traj.disp_x[static_cast<std::size_t>(j)] == doctest::Approx(v * dt).epsilon(1e-14));
    }
}

TEST_CASE("settls: zero velocity keeps departure points at the nodes") {
    PeriodicGrid1D g(10.0, 64);
    VelocityHistory hist;
    hist.v_now.assign(64, 0.0);
    hist.v_prev.assign(64, 0.0);
    auto traj = compute_departure_points(hist, g, 0.5);
    for (int j = 0; j < g.points; ++j) {
        CHECK(traj.x_dep[static_cast<std::size_t>(j)] == g.node(j));
        CHECK(traj.disp_x[static_cast<std::size_t>(j)] == 0.0);
    }
}

TEST_CASE("settls: time-linear velocity is integrated exactly (midpoint rule)") {
    PeriodicGrid1D g(10.0, 256);
    const double a = 0.8, b = 0.45, dt = 0.2, t_now = 1.3;
    auto v = [&](double t, double) { return a + b * t; };
    auto hist = sample_velocity(g, v, t_now, dt);
    auto traj = compute_departure_points(hist, g, dt);
    // exact displacement over [t_now, t_now + dt]: dt * v(t_now + dt/2)
    const double want = dt * (a + b * (t_now + 0.5 * dt));
    for (int j = 0; j < g.points; j += 17)
        CHECK(traj.disp_x[static_cast<std::size_t>(j)] == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("settls: third-order departure error for curved velocity") {
    PeriodicGrid1D g(10.0, 2048);
    auto v = [](double t, double x) { return 1.0 + 0.3 * std::sin(2.0 * 3.14159265358979324 * x / 10.0) * std::cos(2.0 * t); };
    const double t_now = 0.7;
    std::vector<double> dts{0.4, 0.2, 0.1, 0.05}, errs;
    for (double dt : dts) {
        auto hist = sample_velocity(g, v, t_now, dt);
        auto traj = compute_departure_points(hist, g, dt);
        double err = 0.0;
        for (int j = 0; j < g.points; j += 31) {
            // the arrival time is t_now + dt; integrate backward to t_now
            const double exact =
                oracle::rk4_backward_trajectory(v, t_now + dt, g.node(j), t_now, 400);
            const double got = g.node(j) - traj.disp_x[static_cast<std::size_t>(j)];
            err = std::max(err, std::abs(got - exact));
        }
        errs.push_back(err);
    }
    CHECK(oracle::slope_loglog(dts, errs) >= 2.7);
}

TEST_CASE("settls: reversal symmetry negates displacements") {
    // spatially uniform (time-varying) velocity: the fixed point mirrors exactly
    PeriodicGrid1D g(10.0, 512);
    auto v = [](double t, double) { return 0.9 + 0.45 * t - 0.2 * t * t; };
    const double dt = 0.15;
    auto hist = sample_velocity(g, v, 0.4, dt);
    VelocityHistory neg;
    neg.v_now = hist.v_now;
    neg.v_prev = hist.v_prev;
    for (auto& x : neg.v_now) x = -x;
    for (auto& x : neg.v_prev) x = -x;
    auto fwd = compute_departure_points(hist, g, dt);
    auto bwd = compute_departure_points(neg, g, dt);
    for (int j = 0; j < g.points; j += 13)
        CHECK(fwd.disp_x[static_cast<std::size_t>(j)] ==
              doctest::Approx(-bwd.disp_x[static_cast<std::size_t>(j)]).epsilon(1e-12));
}

TEST_CASE("settls: halving dt with constant velocity halves the displacement exactly") {
    PeriodicGrid1D g(10.0, 64);
    VelocityHistory hist;
    hist.v_now.assign(64, 0.7);
    hist.v_prev.assign(64, 0.7);
    auto full = compute_departure_points(hist, g, 0.5);
    auto half = compute_departure_points(hist, g, 0.25);
    for (int j = 0; j < g.points; ++j)
        CHECK(full.disp_x[static_cast<std::size_t>(j)] == 2.0 * half.disp_x[static_cast<std::size_t>(j)]);
}

TEST_CASE("settls: errors and flags") {
    PeriodicGrid1D g(10.0, 64);
    VelocityHistory hist;
    hist.v_now.assign(64, 1.0);
    hist.v_prev.assign(64, 1.0);
    CHECK_THROWS_AS(compute_departure_points(hist, g, -0.1), InvalidInputError);
    hist.v_now[3] = std::nan("");
    CHECK_THROWS_AS(compute_departure_points(hist, g, 0.1), InvalidInputError);

    // a fixed point with Lipschitz constant above 1 does not contract:
    // steep velocity gradient times dt
    VelocityHistory steep;
    steep.v_now.resize(64);
    steep.v_prev.resize(64);
    for (int i = 0; i < 64; ++i) {
        const double x = g.node(i);
        steep.v_now[static_cast<std::size_t>(i)] = 8.0 * std::sin(2.0 * 3.14159265358979324 * x / 10.0);
        steep.v_prev[static_cast<std::size_t>(i)] = -8.0 * std::sin(2.0 * 3.14159265358979324 * x / 10.0);
    }
    auto traj = compute_departure_points(steep, g, 2.0);
    CHECK(!traj.converged); // flagged, not fatal
    CHECK(traj.iterations_used == 10);
}

TEST_CASE("settls: parallel equals serial bitwise") {
    PeriodicGrid1D g(10.0, 1024);
    auto v = [](double t, double x) { return 1.1 + 0.2 * std::cos(2.0 * 3.14159265358979324 * x / 10.0 - t); };
    auto hist = sample_velocity(g, v, 0.9, 0.1);
    auto a = compute_departure_points(hist, g, 0.1);
    auto b = compute_departure_points_serial(hist, g, 0.1);
    for (int j = 0; j < g.points; ++j) {
        CHECK(a.x_dep[static_cast<std::size_t>(j)] == b.x_dep[static_cast<std::size_t>(j)]);
        CHECK(a.disp_x[static_cast<std::size_t>(j)] == b.disp_x[static_cast<std::size_t>(j)]);
    }
    CHECK(a.iterations_used == b.iterations_used);
}

TEST_CASE("settls: optional linear velocity interpolation stays close to cubic") {
    PeriodicGrid1D g(10.0, 1024);
    auto v = [](double t, double x) { return 1.0 + 0.2 * std::sin(2.0 * 3.14159265358979324 * x / 10.0 - 0.1 * t); };
    auto hist = sample_velocity(g, v, 0.5, 0.1);
    SettlsOptions linear;
    linear.linear_velocity_interp = true;
    auto cub = compute_departure_points(hist, g, 0.1);
    auto lin = compute_departure_points(hist, g, 0.1, linear);
    CHECK(lin.converged);
    for (int j = 0; j < g.points; j += 61)
        CHECK(cub.disp_x[static_cast<std::size_t>(j)] ==
              doctest::Approx(lin.disp_x[static_cast<std::size_t>(j)]).epsilon(1e-6));
}

TEST_CASE("settls 2d: constant velocity, displacement in both components") {
    Grid2D g(PeriodicGrid1D(10.0, 32), PeriodicGrid1D(10.0, 32));
    VelocityHistory2D hist;
    hist.vx_now.assign(g.size(), 0.6);
    hist.vy_now.assign(g.size(), -0.4);
    hist.vx_prev = hist.vx_now;
    hist.vy_prev = hist.vy_now;
    auto traj = compute_departure_points2d(hist, g, 0.5);
    CHECK(traj.converged);
    for (std::size_t i = 0; i < g.size(); i += 7) {
        CHECK(traj.disp_x[i] == doctest::Approx(0.3).epsilon(1e-13));
        CHECK(traj.disp_y[i] == doctest::Approx(-0.2).epsilon(1e-13));
    }
}
