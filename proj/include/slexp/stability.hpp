#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "slexp/schemes.hpp"
#include "slexp/smallmat.hpp"

namespace slexp {

// One evaluation of the per-mode amplification |A|(xi_L, xi_N, kappa*s).
struct StabilitySample {
    Complex xi_l;
    Complex xi_n;
    double kappa_s = 0.0;
    double amplification = 0.0; // max root modulus for multi-root schemes
};

// Closed-form stability function of one scheme. Analytic set: ETD1RK, ETD2RK,
// SL_SI_SETTLS (quadratic, max root), SE11, SE12; SE21/SE22 map onto SE11/SE12.
// Throws SingularConfigError when the SL-SI-SETTLS quadratic degenerates
// (xi_l = 2).
StabilitySample stability_function(Scheme scheme, Complex xi_l, Complex xi_n, double kappa_s);

// Both roots of the SL-SI-SETTLS stability quadratic (for max-root validation).
std::array<Complex, 2> settls_stability_roots(Complex xi_l, Complex xi_n, double kappa_s);

// the kappa*s maximization set {0, pi/10, ..., 2 pi}
std::vector<double> default_kappa_s_set();

struct RegionScan {
    std::vector<double> xi_l_im;       // row coordinates
    std::vector<double> xi_n_im;       // column coordinates
    std::vector<double> amplification; // row-major [i_l * n_cols + i_n], max over kappa_s
    std::vector<std::uint8_t> stable;  // amplification <= 1 + 1e-12
};

// Scan over purely imaginary xi_l (rows) and xi_n (columns), maximizing the
// amplification over the kappa_s set.
RegionScan region_scan(Scheme scheme, const std::vector<double>& xi_l_im,
                       const std::vector<double>& xi_n_im, const std::vector<double>& kappa_s_set);
RegionScan region_scan_serial(Scheme scheme, const std::vector<double>& xi_l_im,
                              const std::vector<double>& xi_n_im, const std::vector<double>& kappa_s_set);

std::vector<double> linspace(double lo, double hi, int n);

inline constexpr double stability_threshold = 1.0 + 1e-12;

// One step of phi0(dt Lambda)[shift(u)] versus phi0(dt Lambda/2) shift(phi0(dt Lambda/2) u)
// for diagonal Lambda and a one-node right shift; the two agree iff Lambda is a
// multiple of the identity.
struct ShiftCounterexample {
    std::vector<Complex> unsplit;
    std::vector<Complex> split;
};
ShiftCounterexample shift_counterexample(const std::vector<Complex>& lambda,
                                         const std::vector<Complex>& u, double dt);

// Simulation-based growth estimate (power method on the linearized evolution).
struct GrowthEstimate {
    double dominant_eigenvalue = 0.0; // lambda-bar
    double growth_rate = 0.0;         // nu-bar = log(lambda)/dt
    double e_folding = 0.0;           // tau-bar = dt/log(lambda); +-inf when lambda == 1
    long iterations = 0;
    bool converged = false;
};

struct PowerIterationOptions {
    long max_iterations = 4000;
    int window = 50;            // consecutive ratios inspected
    double ratio_tol = 1e-6;    // max-min spread for convergence
    double relative_perturbation = 1e-8;
    std::uint64_t seed = 12345;
};

// R <- G(U-bar + R) - U-bar with renormalization; the Rayleigh-style ratio
// ||R_{n+1}|| / ||R_n|| must vary by less than ratio_tol over `window`
// consecutive iterations to converge. Norm: discrete L2 over all spectral
// coefficients.
GrowthEstimate power_iteration_estimate(const std::function<State(const State&)>& evolve,
                                        const State& steady, double dt,
                                        const PowerIterationOptions& opts = {});

// Convenience wrapper: steady state + scheme step as the evolution operator.
GrowthEstimate power_iteration_estimate(const Problem& problem, const SchemeConfig& cfg,
                                        const State& steady, const PowerIterationOptions& opts = {});

// deterministic mid-band perturbation used to seed the iteration
State perturbation_seed(const State& like, std::uint64_t seed);

} // namespace slexp
