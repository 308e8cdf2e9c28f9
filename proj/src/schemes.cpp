#include "slexp/schemes.hpp"

#include <cmath>
#include <sstream>

namespace slexp {

Scheme scheme_from_name(const std::string& name) {
    if (name == "ETD1RK") return Scheme::ETD1RK;
    if (name == "ETD2RK") return Scheme::ETD2RK;
    if (name == "SE11") return Scheme::SE11;
    if (name == "SE12") return Scheme::SE12;
    if (name == "SE21") return Scheme::SE21;
    if (name == "SE22") return Scheme::SE22;
    if (name == "SL-SI-SETTLS" || name == "SL_SI_SETTLS") return Scheme::SL_SI_SETTLS;
    if (name == "RK4" || name == "RK4_REF") return Scheme::RK4_REF;
    std::ostringstream msg;
    msg << "unknown scheme '" << name
        << "'; candidates: ETD1RK ETD2RK SE11 SE12 SE21 SE22 SL-SI-SETTLS RK4";
    throw UsageError(msg.str());
}

std::string scheme_name(Scheme s) {
    switch (s) {
        case Scheme::ETD1RK: return "ETD1RK";
        case Scheme::ETD2RK: return "ETD2RK";
        case Scheme::SE11: return "SE11";
        case Scheme::SE12: return "SE12";
        case Scheme::SE21: return "SE21";
        case Scheme::SE22: return "SE22";
        case Scheme::SL_SI_SETTLS: return "SL-SI-SETTLS";
        case Scheme::RK4_REF: return "RK4";
    }
    return "?";
}

bool scheme_is_semi_lagrangian(Scheme s) {
    switch (s) {
        case Scheme::SE11:
        case Scheme::SE12:
        case Scheme::SE21:
        case Scheme::SE22:
        case Scheme::SL_SI_SETTLS: return true;
        default: return false;
    }
}

void SchemeConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidInputError("SchemeConfig: dt must be positive");
    if (viscosity_order < 0 || viscosity_order % 2 != 0)
        throw InvalidInputError("SchemeConfig: viscosity order must be even and >= 0");
    if (viscosity_coeff < 0.0) throw InvalidInputError("SchemeConfig: viscosity coefficient must be >= 0");
    if ((viscosity_order == 0) != (viscosity_coeff == 0.0))
        throw InvalidInputError("SchemeConfig: q == 0 iff nu == 0");
}

namespace {

void check_blowup(const State& u, double threshold, long step_index) {
    if (!state_finite(u)) throw BlowUpError("non-finite state", step_index);
    if (state_max_abs(u) > threshold) throw BlowUpError("state magnitude above blow-up threshold", step_index);
}

struct Ctx {
    const SchemeConfig& cfg;
    const Problem& p;
    const StepState& s;
    OpCounters& n;

    double dt() const { return cfg.dt; }

    State phi(int k, double scale, const State& u) const {
        if (k == 0) ++n.phi0;
        else if (k == 1) ++n.phi1;
        else ++n.phi2;
        return p.apply_phi(k, scale, u);
    }
    State psi(int k, const State& u) const {
        if (k == 1) ++n.psi1;
        else ++n.psi2;
        return p.apply_psi(k, dt(), u);
    }
    TrajectorySet trajectories(const Velocity& now) const {
        if (!s.has_vel_prev) throw StateError("semi-Lagrangian step without velocity history");
        ++n.trajectory_solves;
        return p.departure_points(now, s.vel_prev, dt(), cfg.settls);
    }
    State interp(const TrajectorySet& tr, const State& u) const {
        ++n.interpolations;
        return p.interpolate_to(tr, u);
    }
    State nonlinear(double t, const State& u) const {
        ++n.nonlinear_remainder;
        return p.eval_nonlinear(t, u);
    }
    State nonlinear_eulerian(double t, const State& u) const {
        ++n.nonlinear_advection;
        ++n.nonlinear_remainder;
        return p.eval_nonlinear_eulerian(t, u);
    }
};

// U+ = phi0 U + dt phi1 N(U)
State etd1rk(const Ctx& c, State* n_now_out) {
    const State& u = c.s.u;
    State nn = c.nonlinear_eulerian(c.s.t, u);
    if (n_now_out) *n_now_out = nn;
    State r = c.phi(0, c.dt(), u);
    return state_axpy(c.dt(), c.phi(1, c.dt(), nn), r);
}

State etd2rk(const Ctx& c) {
    State n_now;
    State u1 = etd1rk(c, &n_now);
    State n_1 = c.nonlinear_eulerian(c.s.t + c.dt(), u1);
    State diff = state_sub(n_1, n_now);
    return state_axpy(c.dt(), c.phi(2, c.dt(), diff), u1);
}

// U+ = phi0(dt L) [U + dt psi1(dt L) N~(U)]_*
State se11(const Ctx& c, const TrajectorySet& traj, const State* n_now) {
    const State& u = c.s.u;
    State inner = u;
    if (n_now) inner = state_axpy(c.dt(), c.psi(1, *n_now), u);
    return c.phi(0, c.dt(), c.interp(traj, inner));
}

// SE11 + dt phi0(dt L)[psi2 N~(U1) - (psi2 N~(U))_*]
State se12(const Ctx& c, const TrajectorySet& traj, const State* n_now) {
    State u1 = se11(c, traj, n_now);
    if (!n_now) return u1; // pure-linear problem: correction vanishes
    State n1 = c.nonlinear(c.s.t + c.dt(), u1);
    State a = c.psi(2, n1);
    State b = c.interp(traj, c.psi(2, *n_now));
    return state_axpy(c.dt(), c.phi(0, c.dt(), state_sub(a, b)), u1);
}

// U+ = phi0(dt L/2)[phi0(dt L/2) U]_* + phi0(dt L)[dt psi1(dt L) N~(U)]_*
State se21(const Ctx& c, const TrajectorySet& traj, const State* n_now) {
    const State& u = c.s.u;
    State w = c.phi(0, 0.5 * c.dt(), u);
    State lin = c.phi(0, 0.5 * c.dt(), c.interp(traj, w));
    if (!n_now) return lin;
    State b = state_scaled(c.dt(), c.psi(1, *n_now));
    State nl = c.phi(0, c.dt(), c.interp(traj, b));
    return state_add(lin, nl);
}

State se22(const Ctx& c, const TrajectorySet& traj, const State* n_now) {
    State u1 = se21(c, traj, n_now);
    if (!n_now) return u1;
    State n1 = c.nonlinear(c.s.t + c.dt(), u1);
    State a = c.psi(2, n1);
    State b = c.interp(traj, c.psi(2, *n_now));
    return state_axpy(c.dt(), c.phi(0, c.dt(), state_sub(a, b)), u1);
}

// (U+ - U_*)/dt = 1/2 (L U+ + (L U)_*) + 1/2 ([2 N~(U) - N~(U-)]_* + N~(U))
State sl_si_settls(const Ctx& c, const TrajectorySet& traj, const State* n_now) {
    const State& u = c.s.u;
    ++c.n.linear_applies;
    State lu = c.p.apply_linear(u);
    State a1 = c.interp(traj, state_axpy(0.5 * c.dt(), lu, u));
    State rhs = a1;
    if (n_now) {
        if (!c.s.has_nonlin_prev) throw StateError("SL-SI-SETTLS step without cached nonlinear history");
        State extrap = state_sub(state_scaled(2.0, *n_now), c.s.nonlin_prev);
        State a2 = c.interp(traj, extrap);
        rhs = state_axpy(0.5 * c.dt(), a2, rhs);
        rhs = state_axpy(0.5 * c.dt(), *n_now, rhs);
    }
    ++c.n.linear_solves;
    return c.p.solve_semi_implicit(0.5 * c.dt(), rhs);
}

} // namespace

State rk4_reference(const Problem& problem, const State& u, double t, double dt) {
    State k1 = problem.eval_rhs_eulerian(t, u);
    State k2 = problem.eval_rhs_eulerian(t + 0.5 * dt, state_axpy(0.5 * dt, k1, u));
    State k3 = problem.eval_rhs_eulerian(t + 0.5 * dt, state_axpy(0.5 * dt, k2, u));
    State k4 = problem.eval_rhs_eulerian(t + dt, state_axpy(dt, k3, u));
    State acc = state_axpy(2.0, k2, k1);
    acc = state_axpy(2.0, k3, acc);
    acc = state_add(k4, acc);
    return state_axpy(dt / 6.0, acc, u);
}

StepResult step(const SchemeConfig& cfg, const Problem& problem, const StepState& state) {
    cfg.validate();
    StepResult res;
    res.state.t = state.t + cfg.dt;
    res.state.step_index = state.step_index + 1;
    Ctx c{cfg, problem, state, res.counters};

    const bool sl = scheme_is_semi_lagrangian(cfg.scheme);
    State n_now;
    const State* n_now_ptr = nullptr;
    TrajectorySet traj;
    Velocity vel_now;

    if (sl) {
        vel_now = problem.velocity(state.t, state.u);
        traj = c.trajectories(vel_now);
        if (problem.has_nonlinear()) {
            n_now = c.nonlinear(state.t, state.u);
            n_now_ptr = &n_now;
        }
    }

    switch (cfg.scheme) {
        case Scheme::ETD1RK: res.state.u = etd1rk(c, nullptr); break;
        case Scheme::ETD2RK: res.state.u = etd2rk(c); break;
        case Scheme::SE11: res.state.u = se11(c, traj, n_now_ptr); break;
        case Scheme::SE12: res.state.u = se12(c, traj, n_now_ptr); break;
        case Scheme::SE21: res.state.u = se21(c, traj, n_now_ptr); break;
        case Scheme::SE22: res.state.u = se22(c, traj, n_now_ptr); break;
        case Scheme::SL_SI_SETTLS: res.state.u = sl_si_settls(c, traj, n_now_ptr); break;
        case Scheme::RK4_REF:
            res.state.u = rk4_reference(problem, state.u, state.t, cfg.dt);
            res.counters.linear_applies += 4;
            res.counters.nonlinear_advection += 4;
            res.counters.nonlinear_remainder += 4;
            break;
    }

    if (cfg.viscosity_coeff > 0.0)
        res.state.u = problem.hyperviscosity(res.state.u, cfg.dt, cfg.viscosity_order, cfg.viscosity_coeff);

    check_blowup(res.state.u, cfg.blowup_threshold, res.state.step_index);

    if (sl) {
        res.state.vel_prev = vel_now;
        res.state.has_vel_prev = true;
        if (cfg.scheme == Scheme::SL_SI_SETTLS && n_now_ptr) {
            res.state.nonlin_prev = n_now;
            res.state.has_nonlin_prev = true;
        }
    }
    return res;
}

StepState bootstrap_state(const SchemeConfig& cfg, const Problem& problem, State u0, double t0) {
    StepState s;
    s.u = std::move(u0);
    s.t = t0;
    s.step_index = 0;
    if (scheme_is_semi_lagrangian(cfg.scheme)) {
        s.vel_prev = problem.velocity(t0, s.u);
        s.has_vel_prev = true;
        if (cfg.scheme == Scheme::SL_SI_SETTLS && problem.has_nonlinear()) {
            s.nonlin_prev = problem.eval_nonlinear(t0, s.u);
            s.has_nonlin_prev = true;
        }
    }
    return s;
}

StepState integrate(const SchemeConfig& cfg, const Problem& problem, StepState state, long n_steps,
                    OpCounters* last_counters) {
    for (long i = 0; i < n_steps; ++i) {
        StepResult r = step(cfg, problem, state);
        state = std::move(r.state);
        if (last_counters) *last_counters = r.counters;
    }
    return state;
}

State linear_propagate_first_order(const Problem& problem, const StepState& state, double dt,
                                   const SettlsOptions& opts) {
    if (!state.has_vel_prev) throw StateError("linear propagator without velocity history");
    Velocity now = problem.velocity(state.t, state.u);
    TrajectorySet traj = problem.departure_points(now, state.vel_prev, dt, opts);
    return problem.apply_phi(0, dt, problem.interpolate_to(traj, state.u));
}

State linear_propagate_second_order(const Problem& problem, const StepState& state, double dt,
                                    const SettlsOptions& opts) {
    if (!state.has_vel_prev) throw StateError("linear propagator without velocity history");
    Velocity now = problem.velocity(state.t, state.u);
    TrajectorySet traj = problem.departure_points(now, state.vel_prev, dt, opts);
    State w = problem.apply_phi(0, 0.5 * dt, state.u);
    return problem.apply_phi(0, 0.5 * dt, problem.interpolate_to(traj, w));
}

State hyperviscosity_step(const Problem& problem, const State& u, const SchemeConfig& cfg) {
    if (cfg.viscosity_coeff == 0.0) return u;
    return problem.hyperviscosity(u, cfg.dt, cfg.viscosity_order, cfg.viscosity_coeff);
}

State rk4_integrate(const Problem& problem, State u0, double t0, double dt, long n_steps) {
    State u = std::move(u0);
    for (long i = 0; i < n_steps; ++i) {
        u = rk4_reference(problem, u, t0 + static_cast<double>(i) * dt, dt);
        if (!state_finite(u)) throw BlowUpError("reference integration blew up", i + 1);
    }
    return u;
}

} // namespace slexp
