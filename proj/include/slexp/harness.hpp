#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "slexp/schemes.hpp"
#include "slexp/stability.hpp"

namespace slexp {

enum class Norm { L2, Linf };

// relative grid-space norm ||u - ref|| / ||ref||; DivisionGuardError on zero reference
double compute_error_norm(const std::vector<double>& u, const std::vector<double>& ref, Norm norm);

// shell-summed kinetic energy (1/2)(|u_hat|^2 + |v_hat|^2) over integer
// wavenumber annuli; components (Phi', u, v)
std::vector<double> kinetic_energy_spectrum(const State& state, const Grid2D& grid);

struct RunConfig {
    std::string problem = "scalar-sinL";
    std::string scheme = "SE22";
    std::vector<double> dts{1.0, 0.5, 0.25, 0.125};  // sorted descending
    std::vector<int> resolutions{2048};              // powers of two
    double end_time = 10.0;
    std::string output_dir = ".";
    std::uint64_t seed = 12345;
    int viscosity_order = 0;
    double viscosity_coeff = 0.0;
    double ref_dt = 0.03125 / 10.0;
    std::string reference = "rk4"; // "rk4" or "analytic"

    void validate() const;
};

struct ErrorRecord {
    int resolution = 0;
    double dt = 0.0;
    double l2 = 0.0;
    double linf = 0.0;
    double wall_seconds = 0.0;
    bool blow_up = false;
};

struct ConvergenceStudy {
    std::vector<ErrorRecord> records;
    double fitted_order_l2 = 0.0; // NaN when the fit was skipped
    int fit_points = 0;
    bool fit_skipped = false;
};

// Integrates every (resolution, dt) pair to end_time, compares against the
// reference at the final time, and fits the log-log slope over points that
// neither blew up nor converged to the reference floor (error < 1e-10).
// EmptyStudyError when every run blew up.
ConvergenceStudy run_convergence(const RunConfig& cfg);

// least-squares slope of log(y) against log(x)
double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

inline constexpr double order_fit_floor = 1e-10;

// ---- output files -------------------------------------------------------------

std::string format_g17(double v); // %.17g

void write_error_csv(const std::string& path, const std::string& problem, const std::string& scheme,
                     const ConvergenceStudy& study);
void write_timings_csv(const std::string& path, const ConvergenceStudy& study);
void write_manifest(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv);
void write_region_csv(const std::string& path, const RegionScan& scan);
// portable graymaps: amplification clipped to [0,2] -> [0,255], mask 0/255
void write_region_pgm(const std::string& amp_path, const std::string& mask_path, const RegionScan& scan);

// ---- CLI ------------------------------------------------------------------------

// subcommands: converge, stability-scan, power-method, spectrum, counters.
// exit 0 success, 1 usage error, 2 blow-up-dominated study.
int cli_main(int argc, char** argv);

} // namespace slexp
