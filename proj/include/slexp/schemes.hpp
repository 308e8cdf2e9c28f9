#pragma once

#include <optional>
#include <string>

#include "slexp/problems.hpp"

namespace slexp {

enum class Scheme { ETD1RK, ETD2RK, SE11, SE12, SE21, SE22, SL_SI_SETTLS, RK4_REF };

Scheme scheme_from_name(const std::string& name); // UsageError lists candidates
std::string scheme_name(Scheme s);
bool scheme_is_semi_lagrangian(Scheme s);

struct SchemeConfig {
    Scheme scheme = Scheme::SE22;
    double dt = 0.1;
    int viscosity_order = 0;     // q, even; 0 iff viscosity_coeff == 0
    double viscosity_coeff = 0.0; // nu >= 0
    SettlsOptions settls;
    double blowup_threshold = 1e30;

    void validate() const;
};

// Work performed in one step, one slot per operation class of the complexity
// table: phi_k / psi_k applications, trajectory solves x_d, interpolations
// ()_*, L and L^{-1} applications, and nonlinear evaluations split into the
// advection and remainder parts (an Eulerian full-N evaluation counts one of
// each).
struct OpCounters {
    long phi0 = 0, phi1 = 0, phi2 = 0;
    long psi1 = 0, psi2 = 0;
    long trajectory_solves = 0;
    long interpolations = 0;
    long linear_applies = 0;
    long linear_solves = 0;
    long nonlinear_advection = 0;
    long nonlinear_remainder = 0;

    long nonlinear_evals() const { return nonlinear_advection + nonlinear_remainder; }
    void reset() { *this = OpCounters{}; }
};

struct StepState {
    State u;
    double t = 0.0;
    long step_index = 0;
    // two-time-level history
    Velocity vel_prev;
    bool has_vel_prev = false;
    State nonlin_prev;
    bool has_nonlin_prev = false;
};

struct StepResult {
    StepState state;
    OpCounters counters;
};

// One step of cfg.scheme. Requires the history the scheme needs (StateError
// otherwise); use bootstrap_state for the first step. Throws BlowUpError when
// the result exceeds cfg.blowup_threshold or turns non-finite.
StepResult step(const SchemeConfig& cfg, const Problem& problem, const StepState& state);

// First-step history initialization: v_prev := v(t0), N~_prev := N~(U0).
StepState bootstrap_state(const SchemeConfig& cfg, const Problem& problem, State u0, double t0 = 0.0);

// n_steps applications of step(); counters of the last step optionally out.
StepState integrate(const SchemeConfig& cfg, const Problem& problem, StepState state, long n_steps,
                    OpCounters* last_counters = nullptr);

// U^{n+1} = phi_0(dt L) [U^n]_*   (pure-linear propagator, interpolate then
// exponential at the arrival point, exactly in that order)
State linear_propagate_first_order(const Problem& problem, const StepState& state, double dt,
                                   const SettlsOptions& opts = {});

// U^{n+1} = phi_0(dt L / 2) [phi_0(dt L / 2) U^n]_*   (split exponential)
State linear_propagate_second_order(const Problem& problem, const StepState& state, double dt,
                                    const SettlsOptions& opts = {});

// backward-Euler viscosity stage, identity when nu == 0
State hyperviscosity_step(const Problem& problem, const State& u, const SchemeConfig& cfg);

// classical 4-stage Runge-Kutta step on the full Eulerian right-hand side
State rk4_reference(const Problem& problem, const State& u, double t, double dt);

// RK4 run from u0 to t_end in n steps (reference-solution generator)
State rk4_integrate(const Problem& problem, State u0, double t0, double dt, long n_steps);

} // namespace slexp
