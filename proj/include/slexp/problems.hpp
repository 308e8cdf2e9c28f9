#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "slexp/exp_core.hpp"
#include "slexp/settls.hpp"
#include "slexp/state.hpp"

namespace slexp {

// A time-integrable problem D U / Dt = L U + N~(U). The problem owns the
// spatial representation: where L is diagonal (per grid node for pointwise
// reaction operators, per wavenumber for the SWE symbol), how fields
// transform between spaces, and how grid-space interpolation is performed.
// Evaluations are pure; instances are immutable after construction and
// shareable across threads.
class Problem {
public:
    virtual ~Problem() = default;

    virtual std::string name() const = 0;
    virtual int components() const = 0;
    virtual bool two_dimensional() const = 0;
    virtual const PeriodicGrid1D& grid1d() const;
    virtual const Grid2D& grid2d() const;

    virtual State initial_state() const = 0;
    virtual bool has_nonlinear() const = 0;

    // application of phi_k(scale*L) / psi_k(scale*L) to the full state
    virtual State apply_phi(int k, double scale, const State& u) const = 0;
    virtual State apply_psi(int k, double scale, const State& u) const = 0;

    // L u, and the semi-implicit solve (I - alpha L)^{-1} u
    virtual State apply_linear(const State& u) const = 0;
    virtual State solve_semi_implicit(double alpha, const State& u) const = 0;

    // non-advective nonlinear term N~ (zero state when has_nonlinear() is false)
    virtual State eval_nonlinear(double t, const State& u) const = 0;

    // Eulerian form: full right-hand side L u + N~(u) - v . grad u, and the
    // nonlinear part N(u) = N~(u) - v . grad u used by the Eulerian ETDRK schemes
    virtual State eval_rhs_eulerian(double t, const State& u) const = 0;
    virtual State eval_nonlinear_eulerian(double t, const State& u) const = 0;

    // semi-Lagrangian machinery
    virtual Velocity velocity(double t, const State& u) const = 0;
    virtual TrajectorySet departure_points(const Velocity& now, const Velocity& prev, double dt,
                                           const SettlsOptions& opts) const = 0;
    virtual State interpolate_to(const TrajectorySet& traj, const State& u) const = 0;

    // backward-Euler hyperviscosity stage: mode *= 1/(1 + dt nu kappa^q)
    virtual State hyperviscosity(const State& u, double dt, int q, double nu) const = 0;

    // concatenated real nodal values of all components (error norms, diagnostics)
    virtual std::vector<double> grid_values(const State& u) const = 0;

    // closed-form solution when available (constant-coefficient cases)
    virtual bool has_analytic_solution() const { return false; }
    virtual State analytic_state(double t) const;
};

// ---- 1D advection-reaction problems -----------------------------------------

using ScalarFieldFn = std::function<double(double)>;          // x -> value
using VelocityFn = std::function<double(double, double)>;     // (t, x) -> v

struct ScalarProblemConfig {
    double domain_length = 10.0;
    int points = 2048;
    ScalarFieldFn reaction;                 // L(x)
    VelocityFn velocity;                    // v(t, x)
    ScalarFieldFn initial;                  // u0(x)
    // optional nonlinear reaction g(u, x), treated as N~
    std::function<double(double, double)> nonlinear_reaction;
    // set when (L const, v const): enables the closed-form solution
    bool constant_coefficients = false;
    double const_reaction = 0.0;
    double const_velocity = 0.0;
    std::string label = "scalar";
};

std::unique_ptr<Problem> make_scalar_problem(ScalarProblemConfig cfg);

using MatrixFieldFn = std::function<std::array<double, 4>(double)>; // x -> row-major 2x2

struct VectorProblemConfig {
    double domain_length = 10.0;
    int points = 2048;
    MatrixFieldFn reaction;                 // L(x), 2x2
    VelocityFn velocity;
    ScalarFieldFn initial;                  // same profile in both components
    std::string label = "vector";
};

std::unique_ptr<Problem> make_vector_problem(VectorProblemConfig cfg);

// ---- biperiodic-plane shallow-water testbed ----------------------------------

struct SwePlaneConfig {
    double lx = 10.0, ly = 10.0;
    int points_x = 64, points_y = 64;
    double mean_geopotential = 10.0; // Phi-bar > 0
    double coriolis = 1.0;           // f (f-plane)
    bool coriolis_in_nonlinear = false;
    // initial condition: zonal balanced state, optionally with a bump on Phi'
    double balance_amplitude = 1.0;
    double bump_amplitude = 0.0;
    double bump_sigma2 = 1.0;
    std::string label = "swe-plane";
};

// Components are (Phi', u, v) in that order.
std::unique_ptr<Problem> make_swe_plane_problem(SwePlaneConfig cfg);

// per-mode symbol of the linearized f-plane SWE operator in (Phi', u, v)
CMat swe_plane_symbol(double kx, double ky, double mean_geopotential, double coriolis);

// eigendecomposed symbol (throws DecompositionError if non-diagonalizable)
SymbolMatrix linear_symbol(double kx, double ky, double mean_geopotential, double coriolis);

// quadratic energy sum over modes of (Phi-bar (|u|^2+|v|^2) + |Phi'|^2)/2,
// conserved by the exact linear f-plane propagator
double swe_quadratic_energy(const State& u, double mean_geopotential);

namespace detail {
// per-mode 3x3 block application kernel, r_i = M_i u_i (parallel + serial
// reference); used by the SWE operator applications and the benchmark
void apply_mode_table(const std::vector<CMat>& table, const State& u, State& out, bool parallel);
} // namespace detail

// ---- registry ----------------------------------------------------------------

// Problem setups addressable by name: scalar-constL, scalar-sinL, vector-L1,
// vector-L2, swe-plane-balanced, swe-plane-perturbed. resolution <= 0 keeps
// the default. Throws UsageError for unknown names (message lists candidates).
std::unique_ptr<Problem> make_problem(const std::string& name, int resolution = 0);
std::vector<std::string> problem_names();

} // namespace slexp
