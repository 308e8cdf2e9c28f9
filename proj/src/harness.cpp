#include "slexp/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace slexp {

double compute_error_norm(const std::vector<double>& u, const std::vector<double>& ref, Norm norm) {
    if (u.size() != ref.size()) throw DimensionError("compute_error_norm: size mismatch");
    if (norm == Norm::L2) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const double d = u[i] - ref[i];
            num += d * d;
            den += ref[i] * ref[i];
        }
        if (den == 0.0) throw DivisionGuardError("compute_error_norm: zero reference norm");
        return std::sqrt(num / den);
    }
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        num = std::max(num, std::abs(u[i] - ref[i]));
        den = std::max(den, std::abs(ref[i]));
    }
    if (den == 0.0) throw DivisionGuardError("compute_error_norm: zero reference norm");
    return num / den;
}

std::vector<double> kinetic_energy_spectrum(const State& state, const Grid2D& grid) {
    if (state.comps.size() < 3) throw DimensionError("kinetic_energy_spectrum: expected (Phi', u, v)");
    const int px = grid.x.points, py = grid.y.points;
    // the corner modes reach sqrt((px/2)^2 + (py/2)^2), keep every shell
    const int max_shell =
        static_cast<int>(std::lround(std::sqrt(0.25 * px * px + 0.25 * py * py))) + 1;
    std::vector<double> shells(static_cast<std::size_t>(max_shell + 1), 0.0);
    for (int iy = 0; iy < py; ++iy)
        for (int ix = 0; ix < px; ++ix) {
            const double kx = signed_index(ix, px);
            const double ky = signed_index(iy, py);
            const int shell = static_cast<int>(std::lround(std::sqrt(kx * kx + ky * ky)));
            const std::size_t i = grid.index(ix, iy);
            shells[static_cast<std::size_t>(shell)] +=
                0.5 * (std::norm(state.comps[1].c[i]) + std::norm(state.comps[2].c[i]));
        }
    return shells;
}

void RunConfig::validate() const {
    if (dts.empty()) throw UsageError("RunConfig: empty dt list");
    for (std::size_t i = 1; i < dts.size(); ++i)
        if (!(dts[i] < dts[i - 1])) throw UsageError("RunConfig: dt list must be sorted descending");
    for (double dt : dts)
        if (!(dt > 0.0)) throw UsageError("RunConfig: dt must be positive");
    if (resolutions.empty()) throw UsageError("RunConfig: empty resolution list");
    for (int r : resolutions)
        if (r < 4 || (r & (r - 1)) != 0) throw UsageError("RunConfig: resolutions must be powers of two");
    if (!(end_time > 0.0)) throw UsageError("RunConfig: end time must be positive");
    if (reference != "rk4" && reference != "analytic")
        throw UsageError("RunConfig: reference must be rk4 or analytic");
    if (!(ref_dt > 0.0)) throw UsageError("RunConfig: reference dt must be positive");
}

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw InvalidInputError("fit_loglog_slope: need >= 2 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

ConvergenceStudy run_convergence(const RunConfig& cfg) {
    cfg.validate();
    ConvergenceStudy study;
    const double t_end = cfg.end_time;

    for (int res : cfg.resolutions) {
        auto problem = make_problem(cfg.problem, res);

        // reference at the final time, shared by all dt of this resolution
        std::vector<double> ref_values;
        if (cfg.reference == "analytic") {
            ref_values = problem->grid_values(problem->analytic_state(t_end));
        } else {
            const long n_ref = std::max<long>(1, std::llround(t_end / cfg.ref_dt));
            const double dt_ref = t_end / static_cast<double>(n_ref);
            State ref = rk4_integrate(*problem, problem->initial_state(), 0.0, dt_ref, n_ref);
            ref_values = problem->grid_values(ref);
        }

        for (double dt : cfg.dts) {
            const long n_steps = std::max<long>(1, std::llround(t_end / dt));
            const double dt_eff = t_end / static_cast<double>(n_steps);
            SchemeConfig scfg;
            scfg.scheme = scheme_from_name(cfg.scheme);
            scfg.dt = dt_eff;
            scfg.viscosity_order = cfg.viscosity_order;
            scfg.viscosity_coeff = cfg.viscosity_coeff;

            ErrorRecord rec;
            rec.resolution = res;
            rec.dt = dt_eff;
            const auto t0 = std::chrono::steady_clock::now();
            try {
                StepState s = bootstrap_state(scfg, *problem, problem->initial_state());
                s = integrate(scfg, *problem, std::move(s), n_steps);
                auto vals = problem->grid_values(s.u);
                rec.l2 = compute_error_norm(vals, ref_values, Norm::L2);
                rec.linf = compute_error_norm(vals, ref_values, Norm::Linf);
            } catch (const BlowUpError&) {
                rec.blow_up = true;
                rec.l2 = std::numeric_limits<double>::quiet_NaN();
                rec.linf = std::numeric_limits<double>::quiet_NaN();
            }
            rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            study.records.push_back(rec);
        }
    }

    std::size_t usable = 0;
    std::vector<double> xs, ys;
    for (const auto& r : study.records) {
        if (r.blow_up) continue;
        ++usable;
        if (r.l2 < order_fit_floor) continue; // converged to the reference floor
        xs.push_back(r.dt);
        ys.push_back(r.l2);
    }
    if (usable == 0) throw EmptyStudyError("run_convergence: every run blew up");
    if (xs.size() >= 2) {
        study.fitted_order_l2 = fit_loglog_slope(xs, ys);
        study.fit_points = static_cast<int>(xs.size());
    } else {
        study.fitted_order_l2 = std::numeric_limits<double>::quiet_NaN();
        study.fit_skipped = true;
    }
    return study;
}

// ---- output files ----------------------------------------------------------------

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_error_csv(const std::string& path, const std::string& problem, const std::string& scheme,
                     const ConvergenceStudy& study) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path);
    out << "problem,scheme,resolution,dt,l2_error,linf_error,blow_up\n";
    for (const auto& r : study.records) {
        out << problem << ',' << scheme << ',' << r.resolution << ',' << format_g17(r.dt) << ',';
        if (r.blow_up)
            out << ",,1\n";
        else
            out << format_g17(r.l2) << ',' << format_g17(r.linf) << ",0\n";
    }
    if (study.fit_skipped)
        out << "# fitted_order_l2,skipped\n";
    else
        out << "# fitted_order_l2," << format_g17(study.fitted_order_l2) << '\n';
}

void write_timings_csv(const std::string& path, const ConvergenceStudy& study) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path);
    out << "resolution,dt,wall_seconds\n";
    for (const auto& r : study.records)
        out << r.resolution << ',' << format_g17(r.dt) << ',' << format_g17(r.wall_seconds) << '\n';
}

void write_manifest(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path);
    out << "[run]\n";
    for (const auto& [k, v] : kv) out << k << '=' << v << '\n';
}

void write_region_csv(const std::string& path, const RegionScan& scan) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path);
    out << "xi_l_im,xi_n_im,amplification,stable\n";
    const std::size_t nn = scan.xi_n_im.size();
    for (std::size_t il = 0; il < scan.xi_l_im.size(); ++il)
        for (std::size_t in = 0; in < nn; ++in) {
            const std::size_t idx = il * nn + in;
            out << format_g17(scan.xi_l_im[il]) << ',' << format_g17(scan.xi_n_im[in]) << ','
                << format_g17(scan.amplification[idx]) << ',' << int(scan.stable[idx]) << '\n';
        }
}

void write_region_pgm(const std::string& amp_path, const std::string& mask_path, const RegionScan& scan) {
    const std::size_t h = scan.xi_l_im.size(), w = scan.xi_n_im.size();
    auto write = [&](const std::string& path, auto value_of) {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot open " + path);
        out << "P2\n" << w << ' ' << h << "\n255\n";
        for (std::size_t il = 0; il < h; ++il) {
            for (std::size_t in = 0; in < w; ++in) {
                out << value_of(il * w + in);
                out << (in + 1 == w ? '\n' : ' ');
            }
        }
    };
    write(amp_path, [&](std::size_t i) {
        const double a = std::min(scan.amplification[i], 2.0);
        return static_cast<int>(std::lround(a / 2.0 * 255.0));
    });
    write(mask_path, [&](std::size_t i) { return scan.stable[i] ? 255 : 0; });
}

} // namespace slexp
