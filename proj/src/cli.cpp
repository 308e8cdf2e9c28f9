#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "slexp/harness.hpp"

namespace slexp {

namespace {

namespace fs = std::filesystem;

std::string default_output_dir() {
    const char* env = std::getenv("SLEXP_OUTPUT_DIR");
    return env && *env ? env : ".";
}

template <typename T>
std::string join_list(const std::vector<T>& v) {
    std::ostringstream ss;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) ss << ',';
        if constexpr (std::is_same_v<T, double>)
            ss << format_g17(v[i]);
        else
            ss << v[i];
    }
    return ss.str();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec && !fs::exists(dir)) throw Error("cannot create output directory " + dir);
}

using KV = std::vector<std::pair<std::string, std::string>>;

int run_converge(const std::string& problem, const std::string& scheme, const std::vector<double>& dts,
                 const std::vector<int>& res, double end, double ref_dt, const std::string& reference,
                 int visc_q, double visc_nu, std::uint64_t seed, const std::string& out_dir) {
    RunConfig cfg;
    cfg.problem = problem;
    cfg.scheme = scheme;
    cfg.dts = dts;
    cfg.resolutions = res;
    cfg.end_time = end;
    cfg.ref_dt = ref_dt;
    cfg.reference = reference;
    cfg.viscosity_order = visc_q;
    cfg.viscosity_coeff = visc_nu;
    cfg.seed = seed;
    cfg.output_dir = out_dir;
    (void)scheme_from_name(scheme); // validate early, lists candidates
    (void)make_problem(problem, 0);

    ensure_dir(out_dir);
    ConvergenceStudy study = run_convergence(cfg);

    write_error_csv(out_dir + "/errors.csv", cfg.problem, cfg.scheme, study);
    write_timings_csv(out_dir + "/timings.csv", study);
    KV kv{{"subcommand", "converge"},
          {"problem", cfg.problem},
          {"scheme", cfg.scheme},
          {"dt", join_list(cfg.dts)},
          {"resolution", join_list(cfg.resolutions)},
          {"end_time", format_g17(cfg.end_time)},
          {"reference", cfg.reference},
          {"reference_dt", format_g17(cfg.ref_dt)},
          {"viscosity_order", std::to_string(cfg.viscosity_order)},
          {"viscosity_coeff", format_g17(cfg.viscosity_coeff)},
          {"seed", std::to_string(cfg.seed)},
          {"order_fit_floor", format_g17(order_fit_floor)}};
    write_manifest(out_dir + "/run_manifest.txt", kv);

    std::size_t blowups = 0;
    for (const auto& r : study.records)
        if (r.blow_up) ++blowups;
    for (const auto& r : study.records) {
        std::cout << "res=" << r.resolution << " dt=" << format_g17(r.dt);
        if (r.blow_up)
            std::cout << " BLOW-UP\n";
        else
            std::cout << " l2=" << format_g17(r.l2) << " linf=" << format_g17(r.linf) << '\n';
    }
    if (study.fit_skipped)
        std::cout << "fitted order: skipped (errors at reference floor or too few points)\n";
    else
        std::cout << "fitted order (l2): " << format_g17(study.fitted_order_l2) << '\n';
    return (2 * blowups > study.records.size()) ? 2 : 0;
}

int run_stability_scan(const std::string& scheme, int grid_n, double range, const std::string& kappas,
                       const std::string& out_dir) {
    const Scheme s = scheme_from_name(scheme);
    const auto xs = linspace(-range, range, grid_n);
    const std::vector<double> ks =
        (kappas == "zero") ? std::vector<double>{0.0} : default_kappa_s_set();
    ensure_dir(out_dir);
    RegionScan scan = region_scan(s, xs, xs, ks);
    write_region_csv(out_dir + "/stability_region.csv", scan);
    write_region_pgm(out_dir + "/amplification.pgm", out_dir + "/stable.pgm", scan);
    KV kv{{"subcommand", "stability-scan"}, {"scheme", scheme},
          {"grid", std::to_string(grid_n)}, {"range", format_g17(range)},
          {"kappa_s_set", kappas},          {"stability_threshold", format_g17(stability_threshold)}};
    write_manifest(out_dir + "/run_manifest.txt", kv);
    std::size_t stable_cells = 0;
    for (auto b : scan.stable) stable_cells += b;
    std::cout << "scanned " << scan.amplification.size() << " cells, " << stable_cells << " stable\n";
    return 0;
}

int run_power_method(const std::string& problem_name, const std::string& scheme, double dt,
                     std::uint64_t seed, long max_iters, const std::string& out_dir) {
    auto problem = make_problem(problem_name, 0);
    SchemeConfig cfg;
    cfg.scheme = scheme_from_name(scheme);
    cfg.dt = dt;

    // steady state: the balanced initial condition for the balanced SWE setup,
    // the zero state otherwise (it satisfies the discrete balance trivially)
    State steady;
    if (problem_name == "swe-plane-balanced")
        steady = problem->initial_state();
    else
        steady = state_like(problem->initial_state());

    PowerIterationOptions opts;
    opts.seed = seed;
    opts.max_iterations = max_iters;
    GrowthEstimate est = power_iteration_estimate(*problem, cfg, steady, opts);

    ensure_dir(out_dir);
    std::ofstream out(out_dir + "/power_method.csv", std::ios::binary);
    out << "problem,scheme,dt,converged,iterations,dominant_eigenvalue,growth_rate,e_folding\n";
    out << problem_name << ',' << scheme << ',' << format_g17(dt) << ',' << (est.converged ? 1 : 0) << ','
        << est.iterations << ',' << format_g17(est.dominant_eigenvalue) << ','
        << format_g17(est.growth_rate) << ',' << format_g17(est.e_folding) << '\n';
    KV kv{{"subcommand", "power-method"}, {"problem", problem_name},
          {"scheme", scheme},             {"dt", format_g17(dt)},
          {"seed", std::to_string(seed)}, {"max_iterations", std::to_string(max_iters)},
          {"window", "50"},               {"ratio_tol", format_g17(opts.ratio_tol)},
          {"relative_perturbation", format_g17(opts.relative_perturbation)}};
    write_manifest(out_dir + "/run_manifest.txt", kv);

    std::cout << (est.converged ? "converged" : "NOT converged") << " after " << est.iterations
              << " iterations\n";
    if (est.converged)
        std::cout << "dominant eigenvalue " << format_g17(est.dominant_eigenvalue) << ", growth rate "
                  << format_g17(est.growth_rate) << ", e-folding time " << format_g17(est.e_folding)
                  << '\n';
    return 0;
}

int run_spectrum(const std::string& problem_name, const std::string& scheme, double dt, long steps,
                 const std::string& out_dir) {
    auto problem = make_problem(problem_name, 0);
    if (!problem->two_dimensional()) throw UsageError("spectrum: requires a swe-plane problem");
    SchemeConfig cfg;
    cfg.scheme = scheme_from_name(scheme);
    cfg.dt = dt;
    StepState s = bootstrap_state(cfg, *problem, problem->initial_state());
    s = integrate(cfg, *problem, std::move(s), steps);
    auto shells = kinetic_energy_spectrum(s.u, problem->grid2d());
    ensure_dir(out_dir);
    std::ofstream out(out_dir + "/spectrum.csv", std::ios::binary);
    out << "shell,kinetic_energy\n";
    for (std::size_t i = 0; i < shells.size(); ++i)
        out << i << ',' << format_g17(shells[i]) << '\n';
    KV kv{{"subcommand", "spectrum"}, {"problem", problem_name}, {"scheme", scheme},
          {"dt", format_g17(dt)},     {"steps", std::to_string(steps)}};
    write_manifest(out_dir + "/run_manifest.txt", kv);
    std::cout << "wrote " << shells.size() << " shells\n";
    return 0;
}

int run_counters(const std::string& scheme) {
    // second step of a small nonlinear testbed, so all caches/history are warm
    SwePlaneConfig pcfg;
    pcfg.points_x = pcfg.points_y = 16;
    pcfg.bump_amplitude = 0.5;
    auto problem = make_swe_plane_problem(pcfg);
    SchemeConfig cfg;
    cfg.scheme = scheme_from_name(scheme);
    cfg.dt = 0.01;
    StepState s = bootstrap_state(cfg, *problem, problem->initial_state());
    StepResult first = step(cfg, *problem, s);
    StepResult second = step(cfg, *problem, first.state);
    const OpCounters& n = second.counters;
    std::cout << "scheme,phi0,phi1,phi2,psi1,psi2,trajectory_solves,interpolations,linear_applies,"
                 "linear_solves,nonlinear_advection,nonlinear_remainder\n";
    std::cout << scheme_name(cfg.scheme) << ',' << n.phi0 << ',' << n.phi1 << ',' << n.phi2 << ','
              << n.psi1 << ',' << n.psi2 << ',' << n.trajectory_solves << ',' << n.interpolations << ','
              << n.linear_applies << ',' << n.linear_solves << ',' << n.nonlinear_advection << ','
              << n.nonlinear_remainder << '\n';
    return 0;
}

} // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"semi-Lagrangian exponential time integrator laboratory"};
    app.require_subcommand(1);
    app.set_config("--config");

    std::string problem = "scalar-sinL", scheme = "SE22";
    std::vector<double> dts{1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125};
    std::vector<int> res{2048};
    double end = 10.0, ref_dt = 0.03125 / 10.0;
    std::string reference = "rk4";
    int visc_q = 0;
    double visc_nu = 0.0;
    std::uint64_t seed = 12345;
    std::string out_dir = default_output_dir();

    auto* conv = app.add_subcommand("converge", "convergence study against a reference solution");
    conv->add_option("--problem", problem, "problem name");
    conv->add_option("--scheme", scheme, "time integration scheme");
    conv->add_option("--dt", dts, "comma-separated dt list, descending")->delimiter(',');
    conv->add_option("--res", res, "comma-separated resolutions (powers of two)")->delimiter(',');
    conv->add_option("--end", end, "final time");
    conv->add_option("--ref-dt", ref_dt, "reference RK4 time step");
    conv->add_option("--reference", reference, "rk4 or analytic");
    conv->add_option("--visc-order", visc_q, "hyperviscosity order q (even)");
    conv->add_option("--visc-coeff", visc_nu, "hyperviscosity coefficient nu");
    conv->add_option("--seed", seed, "run seed (recorded in the manifest)");
    conv->add_option("--out", out_dir, "output directory (default $SLEXP_OUTPUT_DIR or .)");

    int grid_n = 401;
    double range = 4.0;
    std::string kappas = "full";
    auto* scan = app.add_subcommand("stability-scan", "amplification raster over imaginary xi_L, xi_N");
    scan->add_option("--scheme", scheme, "scheme in the analytic set");
    scan->add_option("--grid", grid_n, "raster points per axis");
    scan->add_option("--range", range, "scan range: Im in [-range, range]");
    scan->add_option("--kappas", kappas, "kappa*s maximization set: full or zero");
    scan->add_option("--out", out_dir, "output directory");

    double pm_dt = 0.01;
    long pm_iters = 4000;
    auto* power = app.add_subcommand("power-method", "dominant-eigenvalue growth estimate");
    power->add_option("--problem", problem, "problem name");
    power->add_option("--scheme", scheme, "time integration scheme");
    power->add_option("--dt", pm_dt, "time step");
    power->add_option("--seed", seed, "perturbation seed");
    power->add_option("--max-iters", pm_iters, "iteration cap");
    power->add_option("--out", out_dir, "output directory");

    long sp_steps = 100;
    double sp_dt = 0.01;
    auto* spec = app.add_subcommand("spectrum", "kinetic-energy shell spectrum after N steps");
    spec->add_option("--problem", problem, "swe-plane problem name");
    spec->add_option("--scheme", scheme, "time integration scheme");
    spec->add_option("--dt", sp_dt, "time step");
    spec->add_option("--steps", sp_steps, "number of steps");
    spec->add_option("--out", out_dir, "output directory");

    auto* ctr = app.add_subcommand("counters", "per-step operation counts of a scheme");
    ctr->add_option("--scheme", scheme, "time integration scheme");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (conv->parsed())
            return run_converge(problem, scheme, dts, res, end, ref_dt, reference, visc_q, visc_nu, seed,
                                out_dir);
        if (scan->parsed()) return run_stability_scan(scheme, grid_n, range, kappas, out_dir);
        if (power->parsed()) return run_power_method(problem, scheme, pm_dt, seed, pm_iters, out_dir);
        if (spec->parsed()) return run_spectrum(problem, scheme, sp_dt, sp_steps, out_dir);
        if (ctr->parsed()) return run_counters(scheme);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const EmptyStudyError& e) {
        std::cerr << "study failed: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}

} // namespace slexp
