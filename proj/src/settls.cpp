#include "slexp/settls.hpp"

#include <atomic>
#include <cmath>

#include "slexp/errors.hpp"
#include "slexp/interp.hpp"

namespace slexp {

namespace {

void check_finite(const std::vector<double>& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x)) throw InvalidInputError(std::string("SETTLS: non-finite ") + what);
}

double minimal_image(double s, double length) {
    s -= std::round(s / length) * length;
    return s;
}

struct NodeResult {
    double disp;
    int iters;
    bool converged;
};

// One grid node of the 1D fixed-point iteration. The displacement s = x_j - x_d
// is the iterated unknown, so constant-velocity results scale exactly with dt.
NodeResult solve_node_1d(const VelocityHistory& hist, const PeriodicGrid1D& grid, double dt,
                         const SettlsOptions& opts, int j) {
    const double xj = grid.node(j);
    const double v_arr = hist.v_now[static_cast<std::size_t>(j)];
    auto vel_at = [&](const std::vector<double>& v, double x) {
        return opts.linear_velocity_interp ? interp_linear_at(v, grid, x) : interp_cubic_at(v, grid, x);
    };
    double s = dt * v_arr;
    const double tol = opts.tol_factor * grid.dx();
    int it = 0;
    bool conv = false;
    for (; it < opts.max_iter; ++it) {
        const double vmid = 2.0 * vel_at(hist.v_now, xj - s) - vel_at(hist.v_prev, xj - s) + v_arr;
        const double next = 0.5 * dt * vmid;
        const double delta = std::abs(next - s);
        s = next;
        if (delta < tol) {
            conv = true;
            ++it;
            break;
        }
    }
    return {s, it, conv};
}

TrajectorySet departure_1d(const VelocityHistory& hist, const PeriodicGrid1D& grid, double dt,
                           const SettlsOptions& opts, bool parallel) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInputError("SETTLS: dt must be positive");
    if (static_cast<int>(hist.v_now.size()) != grid.points ||
        static_cast<int>(hist.v_prev.size()) != grid.points)
        throw DimensionError("SETTLS: velocity length != grid points");
    check_finite(hist.v_now, "velocity");
    check_finite(hist.v_prev, "velocity");

    const int n = grid.points;
    TrajectorySet out;
    out.x_dep.resize(static_cast<std::size_t>(n));
    out.disp_x.resize(static_cast<std::size_t>(n));
    std::vector<int> iters(static_cast<std::size_t>(n));
    std::vector<unsigned char> conv(static_cast<std::size_t>(n));

    auto body = [&](int j) {
        NodeResult r = solve_node_1d(hist, grid, dt, opts, j);
        out.disp_x[static_cast<std::size_t>(j)] = minimal_image(r.disp, grid.length);
        out.x_dep[static_cast<std::size_t>(j)] = grid.wrap(grid.node(j) - r.disp);
        iters[static_cast<std::size_t>(j)] = r.iters;
        conv[static_cast<std::size_t>(j)] = r.converged ? 1 : 0;
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int j = 0; j < n; ++j) body(j);
    } else {
        for (int j = 0; j < n; ++j) body(j);
    }

    out.iterations_used = 0;
    out.converged = true;
    for (int j = 0; j < n; ++j) {
        out.iterations_used = std::max(out.iterations_used, iters[static_cast<std::size_t>(j)]);
        if (!conv[static_cast<std::size_t>(j)]) out.converged = false;
    }
    return out;
}

} // namespace

TrajectorySet compute_departure_points(const VelocityHistory& hist, const PeriodicGrid1D& grid, double dt,
                                       const SettlsOptions& opts) {
    return departure_1d(hist, grid, dt, opts, true);
}

TrajectorySet compute_departure_points_serial(const VelocityHistory& hist, const PeriodicGrid1D& grid,
                                              double dt, const SettlsOptions& opts) {
    return departure_1d(hist, grid, dt, opts, false);
}

TrajectorySet compute_departure_points2d(const VelocityHistory2D& hist, const Grid2D& grid, double dt,
                                         const SettlsOptions& opts) {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInputError("SETTLS: dt must be positive");
    const std::size_t sz = grid.size();
    if (hist.vx_now.size() != sz || hist.vy_now.size() != sz || hist.vx_prev.size() != sz ||
        hist.vy_prev.size() != sz)
        throw DimensionError("SETTLS: velocity size != grid size");
    check_finite(hist.vx_now, "velocity");
    check_finite(hist.vy_now, "velocity");
    check_finite(hist.vx_prev, "velocity");
    check_finite(hist.vy_prev, "velocity");

    const int nx = grid.x.points, ny = grid.y.points;
    TrajectorySet out;
    out.x_dep.resize(sz);
    out.y_dep.resize(sz);
    out.disp_x.resize(sz);
    out.disp_y.resize(sz);
    std::vector<int> iters(sz);
    std::vector<unsigned char> conv(sz);
    const double tolx = opts.tol_factor * grid.x.dx();
    const double toly = opts.tol_factor * grid.y.dx();

#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < ny; ++iy) {
        for (int ix = 0; ix < nx; ++ix) {
            const std::size_t idx = grid.index(ix, iy);
            const double xj = grid.x.node(ix), yj = grid.y.node(iy);
            const double vxa = hist.vx_now[idx], vya = hist.vy_now[idx];
            double sx = dt * vxa, sy = dt * vya;
            int it = 0;
            bool c = false;
            for (; it < opts.max_iter; ++it) {
                const double xd = xj - sx, yd = yj - sy;
                const double vx_mid = 2.0 * interp_bicubic_at(hist.vx_now, grid, xd, yd) -
                                      interp_bicubic_at(hist.vx_prev, grid, xd, yd) + vxa;
                const double vy_mid = 2.0 * interp_bicubic_at(hist.vy_now, grid, xd, yd) -
                                      interp_bicubic_at(hist.vy_prev, grid, xd, yd) + vya;
                const double nsx = 0.5 * dt * vx_mid;
                const double nsy = 0.5 * dt * vy_mid;
                const double dxs = std::abs(nsx - sx), dys = std::abs(nsy - sy);
                sx = nsx;
                sy = nsy;
                if (dxs < tolx && dys < toly) {
                    c = true;
                    ++it;
                    break;
                }
            }
            out.disp_x[idx] = minimal_image(sx, grid.x.length);
            out.disp_y[idx] = minimal_image(sy, grid.y.length);
            out.x_dep[idx] = grid.x.wrap(xj - sx);
            out.y_dep[idx] = grid.y.wrap(yj - sy);
            iters[idx] = it;
            conv[idx] = c ? 1 : 0;
        }
    }

    out.iterations_used = 0;
    out.converged = true;
    for (std::size_t i = 0; i < sz; ++i) {
        out.iterations_used = std::max(out.iterations_used, iters[i]);
        if (!conv[i]) out.converged = false;
    }
    return out;
}

} // namespace slexp
