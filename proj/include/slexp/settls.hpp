#pragma once

#include <vector>

#include "slexp/grid.hpp"

namespace slexp {

// Grid-sampled velocity at the two time levels SETTLS extrapolates from.
struct VelocityHistory {
    std::vector<double> v_now;  // v(t_n, x_j)
    std::vector<double> v_prev; // v(t_{n-1}, x_j)
};

struct VelocityHistory2D {
    std::vector<double> vx_now, vy_now;
    std::vector<double> vx_prev, vy_prev;
};

// Departure points of the trajectories arriving at each grid node, plus the
// displacements s_j = x_j - x_d reduced to the minimal periodic image.
struct TrajectorySet {
    std::vector<double> x_dep;
    std::vector<double> y_dep; // empty for 1D
    std::vector<double> disp_x;
    std::vector<double> disp_y; // empty for 1D
    int iterations_used = 0;
    bool converged = true;
};

struct SettlsOptions {
    int max_iter = 10;
    double tol_factor = 1e-12; // convergence when |dx| < tol_factor * dx_grid
    bool linear_velocity_interp = false;
};

// Fixed-point SETTLS iteration
//   x_d <- x_j - (dt/2) [2 v_now(x_d) - v_prev(x_d) + v_now(x_j)]
// with cubic interpolation of the velocity at x_d. Non-convergence within
// max_iter is flagged in the result, not fatal.
TrajectorySet compute_departure_points(const VelocityHistory& hist, const PeriodicGrid1D& grid, double dt,
                                       const SettlsOptions& opts = {});
TrajectorySet compute_departure_points_serial(const VelocityHistory& hist, const PeriodicGrid1D& grid,
                                              double dt, const SettlsOptions& opts = {});

// Componentwise iteration on the biperiodic plane, same contract.
TrajectorySet compute_departure_points2d(const VelocityHistory2D& hist, const Grid2D& grid, double dt,
                                         const SettlsOptions& opts = {});

} // namespace slexp
