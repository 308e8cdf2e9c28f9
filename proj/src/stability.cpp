#include "slexp/stability.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "slexp/exp_core.hpp"

namespace slexp {

namespace {

constexpr double pi = 3.141592653589793238462643383279;

Complex unit_shift(double kappa_s) { return std::exp(Complex(0.0, -kappa_s)); }

Complex amp_etd1rk(Complex xl, Complex xn, double ks) {
    return eval_phi(0, xl) + eval_phi(1, xl) * (xn - Complex(0.0, ks));
}

Complex amp_etd2rk(Complex xl, Complex xn, double ks) {
    const Complex a1 = amp_etd1rk(xl, xn, ks);
    return a1 + eval_phi(2, xl) * (xn - Complex(0.0, ks)) * (a1 - 1.0);
}

Complex amp_se11(Complex xl, Complex xn, double ks) {
    return unit_shift(ks) * eval_phi(0, xl) * (1.0 + xn * eval_psi(1, xl));
}

Complex amp_se12(Complex xl, Complex xn, double ks) {
    const Complex a1 = amp_se11(xl, xn, ks);
    return a1 + xn * eval_phi(2, xl) * (a1 - unit_shift(ks));
}

} // namespace

std::array<Complex, 2> settls_stability_roots(Complex xi_l, Complex xi_n, double kappa_s) {
    const Complex e = unit_shift(kappa_s);
    const Complex a = 1.0 - 0.5 * xi_l;
    if (std::abs(a) < 1e-14)
        throw SingularConfigError("SL-SI-SETTLS stability: degenerate quadratic (xi_l = 2)");
    const Complex b = -(e * (1.0 + 0.5 * xi_l + xi_n) + 0.5 * xi_n);
    const Complex c = 0.5 * xi_n * e;
    // monic form z^2 + (b/a) z + (c/a)
    const Complex bm = b / a, cm = c / a;
    Complex disc = std::sqrt(bm * bm - 4.0 * cm);
    Complex q = (std::real(std::conj(bm) * disc) >= 0.0) ? -0.5 * (bm + disc) : -0.5 * (bm - disc);
    if (std::abs(q) == 0.0) return {Complex(0.0), Complex(0.0)};
    return {q, cm / q};
}

StabilitySample stability_function(Scheme scheme, Complex xi_l, Complex xi_n, double kappa_s) {
    StabilitySample s;
    s.xi_l = xi_l;
    s.xi_n = xi_n;
    s.kappa_s = kappa_s;
    switch (scheme) {
        case Scheme::ETD1RK: s.amplification = std::abs(amp_etd1rk(xi_l, xi_n, kappa_s)); break;
        case Scheme::ETD2RK: s.amplification = std::abs(amp_etd2rk(xi_l, xi_n, kappa_s)); break;
        case Scheme::SE11:
        case Scheme::SE21: s.amplification = std::abs(amp_se11(xi_l, xi_n, kappa_s)); break;
        case Scheme::SE12:
        case Scheme::SE22: s.amplification = std::abs(amp_se12(xi_l, xi_n, kappa_s)); break;
        case Scheme::SL_SI_SETTLS: {
            auto r = settls_stability_roots(xi_l, xi_n, kappa_s);
            s.amplification = std::max(std::abs(r[0]), std::abs(r[1]));
            break;
        }
        default: throw InvalidInputError("stability_function: scheme outside the analytic set");
    }
    return s;
}

std::vector<double> default_kappa_s_set() {
    std::vector<double> ks;
    for (int i = 0; i <= 20; ++i) ks.push_back(pi * i / 10.0);
    return ks;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(static_cast<std::size_t>(n));
    if (n == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return v;
}

namespace {

RegionScan scan_impl(Scheme scheme, const std::vector<double>& xls, const std::vector<double>& xns,
                     const std::vector<double>& ks_set, bool parallel) {
    RegionScan r;
    r.xi_l_im = xls;
    r.xi_n_im = xns;
    const long nl = static_cast<long>(xls.size());
    const long nn = static_cast<long>(xns.size());
    r.amplification.assign(static_cast<std::size_t>(nl * nn), 0.0);
    r.stable.assign(static_cast<std::size_t>(nl * nn), 0);
    const auto cell = [&](long idx) {
        const long il = idx / nn, in = idx % nn;
        const Complex xl(0.0, xls[static_cast<std::size_t>(il)]);
        const Complex xn(0.0, xns[static_cast<std::size_t>(in)]);
        double worst = 0.0;
        for (double ks : ks_set)
            worst = std::max(worst, stability_function(scheme, xl, xn, ks).amplification);
        r.amplification[static_cast<std::size_t>(idx)] = worst;
        r.stable[static_cast<std::size_t>(idx)] = (worst <= stability_threshold) ? 1 : 0;
    };
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long idx = 0; idx < nl * nn; ++idx) cell(idx);
    } else {
        for (long idx = 0; idx < nl * nn; ++idx) cell(idx);
    }
    return r;
}

} // namespace

RegionScan region_scan(Scheme scheme, const std::vector<double>& xi_l_im,
                       const std::vector<double>& xi_n_im, const std::vector<double>& kappa_s_set) {
    return scan_impl(scheme, xi_l_im, xi_n_im, kappa_s_set, true);
}

RegionScan region_scan_serial(Scheme scheme, const std::vector<double>& xi_l_im,
                              const std::vector<double>& xi_n_im, const std::vector<double>& kappa_s_set) {
    return scan_impl(scheme, xi_l_im, xi_n_im, kappa_s_set, false);
}

ShiftCounterexample shift_counterexample(const std::vector<Complex>& lambda,
                                         const std::vector<Complex>& u, double dt) {
    if (lambda.size() != u.size()) throw DimensionError("shift_counterexample: size mismatch");
    const std::size_t n = u.size();
    auto shift_right = [n](const std::vector<Complex>& v) {
        std::vector<Complex> r(n);
        for (std::size_t i = 0; i < n; ++i) r[i] = v[(i + n - 1) % n];
        return r;
    };
    ShiftCounterexample out;
    // phi0(dt Lambda) [u]_*
    out.unsplit = shift_right(u);
    for (std::size_t i = 0; i < n; ++i) out.unsplit[i] *= eval_phi(0, dt * lambda[i]);
    // phi0(dt Lambda / 2) [phi0(dt Lambda / 2) u]_*
    std::vector<Complex> w(u);
    for (std::size_t i = 0; i < n; ++i) w[i] *= eval_phi(0, 0.5 * dt * lambda[i]);
    out.split = shift_right(w);
    for (std::size_t i = 0; i < n; ++i) out.split[i] *= eval_phi(0, 0.5 * dt * lambda[i]);
    return out;
}

namespace {

// splitmix64: deterministic, platform-independent
std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

} // namespace

State perturbation_seed(const State& like, std::uint64_t seed) {
    State r = state_like(like);
    std::uint64_t rng = seed * 0x9e3779b97f4a7c15ULL + 1ULL;
    for (auto& comp : r.comps) {
        const int n = static_cast<int>(comp.size());
        // mid-band fill: skip the lowest and highest thirds of wavenumbers
        for (int k = 0; k < n; ++k) {
            const double re = uniform01(rng) - 0.5;
            const double im = uniform01(rng) - 0.5;
            const int m = std::abs(signed_index(k, n));
            if (m < n / 8 || m > n / 3) continue;
            comp.c[static_cast<std::size_t>(k)] = Complex(re, im);
        }
    }
    return r;
}

GrowthEstimate power_iteration_estimate(const std::function<State(const State&)>& evolve,
                                        const State& steady, double dt,
                                        const PowerIterationOptions& opts) {
    GrowthEstimate est;
    const double base = state_l2(steady);
    const double r0 = opts.relative_perturbation * (base > 0.0 ? base : 1.0);

    State pert = perturbation_seed(steady, opts.seed);
    const double pn = state_l2(pert);
    if (pn == 0.0) throw InvalidInputError("power iteration: empty perturbation");
    State r = state_scaled(r0 / pn, pert);

    std::deque<double> window;
    double ratio = 0.0;
    for (long it = 1; it <= opts.max_iterations; ++it) {
        State advanced = evolve(state_add(steady, r));
        State r_next = state_sub(advanced, steady);
        const double nn = state_l2(r_next);
        if (!std::isfinite(nn) || nn == 0.0) {
            est.iterations = it;
            est.converged = false;
            return est;
        }
        ratio = nn / r0;
        window.push_back(ratio);
        if (static_cast<int>(window.size()) > opts.window) window.pop_front();
        if (static_cast<int>(window.size()) == opts.window) {
            const auto [lo, hi] = std::minmax_element(window.begin(), window.end());
            if (*hi - *lo < opts.ratio_tol) {
                est.iterations = it;
                est.converged = true;
                break;
            }
        }
        if (it == opts.max_iterations) {
            est.iterations = it;
            est.converged = false;
            return est;
        }
        r = state_scaled(r0 / nn, r_next); // renormalize
    }

    est.dominant_eigenvalue = ratio;
    est.growth_rate = std::log(ratio) / dt;
    est.e_folding = dt / std::log(ratio);
    return est;
}

GrowthEstimate power_iteration_estimate(const Problem& problem, const SchemeConfig& cfg,
                                        const State& steady, const PowerIterationOptions& opts) {
    auto evolve = [&](const State& u) {
        StepState s = bootstrap_state(cfg, problem, u, 0.0);
        return step(cfg, problem, s).state.u;
    };
    return power_iteration_estimate(evolve, steady, cfg.dt, opts);
}

} // namespace slexp
