// Wall-clock comparison of the OpenMP kernels against their serial reference
// implementations: batch interpolation, SETTLS departure solves, per-mode
// symbol application, and the stability region scan.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "slexp/interp.hpp"
#include "slexp/problems.hpp"
#include "slexp/settls.hpp"
#include "slexp/stability.hpp"

using namespace slexp;

namespace {

template <typename F>
double time_it(F&& f, int reps) {
    // warm-up
    f();
    const auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) f();
    const auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count() / reps;
}

void report(const char* name, double serial, double parallel) {
    std::printf("%-28s serial %9.4f ms   parallel %9.4f ms   speedup %5.2fx\n", name, serial * 1e3,
                parallel * 1e3, serial / parallel);
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("built without OpenMP\n");
#endif

    // batch cubic interpolation
    {
        PeriodicGrid1D grid(10.0, 1 << 14);
        std::vector<double> f(static_cast<std::size_t>(grid.points));
        for (int i = 0; i < grid.points; ++i) f[static_cast<std::size_t>(i)] = std::sin(0.7 * grid.node(i));
        std::vector<double> targets(1 << 20);
        for (std::size_t i = 0; i < targets.size(); ++i)
            targets[i] = std::fmod(0.123 + 9.87 * static_cast<double>(i), 10.0);
        volatile double sink = 0.0;
        const double ts = time_it([&] { sink = interp_cubic_serial(f, grid, targets)[0]; }, 5);
        const double tp = time_it([&] { sink = interp_cubic(f, grid, targets)[0]; }, 5);
        (void)sink;
        report("interp_cubic (2^20 targets)", ts, tp);
    }

    // SETTLS departure points
    {
        PeriodicGrid1D grid(10.0, 1 << 18);
        VelocityHistory hist;
        hist.v_now.resize(static_cast<std::size_t>(grid.points));
        hist.v_prev.resize(static_cast<std::size_t>(grid.points));
        for (int i = 0; i < grid.points; ++i) {
            const double x = grid.node(i);
            hist.v_now[static_cast<std::size_t>(i)] = 1.0 + 0.4 * std::sin(2.0 * x);
            hist.v_prev[static_cast<std::size_t>(i)] = 1.0 + 0.4 * std::sin(2.0 * x - 0.05);
        }
        volatile double sink = 0.0;
        const double ts = time_it([&] { sink = compute_departure_points_serial(hist, grid, 0.05).x_dep[0]; }, 3);
        const double tp = time_it([&] { sink = compute_departure_points(hist, grid, 0.05).x_dep[0]; }, 3);
        (void)sink;
        report("settls departure (2^18)", ts, tp);
    }

    // per-mode 3x3 symbol application
    {
        const int n = 256 * 256;
        std::vector<CMat> table(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            CMat m(3);
            for (int e = 0; e < 9; ++e) m.a[static_cast<std::size_t>(e)] = Complex(0.01 * ((i + e) % 97), 0.02 * ((i * 3 + e) % 53));
            table[static_cast<std::size_t>(i)] = m;
        }
        State u;
        u.comps.resize(3);
        for (auto& c : u.comps) c.c.assign(static_cast<std::size_t>(n), Complex(1.0, -0.5));
        State out = state_like(u);
        const double ts = time_it([&] { detail::apply_mode_table(table, u, out, false); }, 10);
        const double tp = time_it([&] { detail::apply_mode_table(table, u, out, true); }, 10);
        report("mode table 3x3 (256^2)", ts, tp);
    }

    // stability region scan
    {
        const auto xs = linspace(-4.0, 4.0, 201);
        const auto ks = default_kappa_s_set();
        volatile double sink = 0.0;
        const double ts = time_it([&] { sink = region_scan_serial(Scheme::SE12, xs, xs, ks).amplification[0]; }, 1);
        const double tp = time_it([&] { sink = region_scan(Scheme::SE12, xs, xs, ks).amplification[0]; }, 1);
        (void)sink;
        report("region scan 201x201x21", ts, tp);
    }

    return 0;
}
