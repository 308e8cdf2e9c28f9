#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "slexp/harness.hpp"
#include "slexp/problems.hpp"
#include "slexp/schemes.hpp"

using namespace slexp;

namespace {
constexpr double two_pi = 6.283185307179586476925286766559;
}

TEST_CASE("registry: names resolve, unknown names list candidates") {
    for (const auto& n : problem_names()) CHECK(make_problem(n, n.rfind("swe", 0) == 0 ? 16 : 64) != nullptr);
    CHECK_THROWS_AS(make_problem("no-such-problem"), UsageError);
    try {
        make_problem("no-such-problem");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("scalar-sinL") != std::string::npos);
    }
}

TEST_CASE("swe symbol: mode (0,0) with f = 0 is the zero matrix") {
    auto sym = linear_symbol(0.0, 0.0, 10.0, 0.0);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(sym.eig_values()[static_cast<std::size_t>(i)]) == 0.0);
    CHECK(frobenius_norm(sym.entries()) == 0.0);
}

TEST_CASE("swe symbol: gravity-only eigenvalues are {0, +-i sqrt(Phibar K^2)}") {
    const double phibar = 10.0, kx = 1.3, ky = -0.7;
    auto sym = linear_symbol(kx, ky, phibar, 0.0);
    const double mag = std::sqrt(phibar * (kx * kx + ky * ky));
    int zero = 0, pos = 0, neg = 0;
    for (int i = 0; i < 3; ++i) {
        const Complex lam = sym.eig_values()[static_cast<std::size_t>(i)];
        CHECK(std::abs(lam.real()) < 1e-12 * mag);
        if (std::abs(lam) < 1e-10 * mag) ++zero;
        else if (std::abs(lam - Complex(0, mag)) < 1e-9 * mag) ++pos;
        else if (std::abs(lam + Complex(0, mag)) < 1e-9 * mag) ++neg;
    }
    CHECK(zero == 1);
    CHECK(pos == 1);
    CHECK(neg == 1);
}

TEST_CASE("swe symbol: f-plane inertia-gravity dispersion {0, +-i sqrt(f^2 + Phibar K^2)}") {
    const double phibar = 10.0, f = 1.5, kx = 0.9, ky = 0.4;
    auto sym = linear_symbol(kx, ky, phibar, f);
    const double mag = std::sqrt(f * f + phibar * (kx * kx + ky * ky));
    // characteristic-polynomial oracle: det(M - lambda I) has roots 0, +-i mag
    const CMat m = swe_plane_symbol(kx, ky, phibar, f);
    const Complex at_imag = det(m - Complex(0.0, mag) * CMat::identity(3));
    CHECK(std::abs(at_imag) < 1e-9 * std::pow(mag, 3));
    int pos = 0, neg = 0;
    for (int i = 0; i < 3; ++i) {
        const Complex lam = sym.eig_values()[static_cast<std::size_t>(i)];
        if (std::abs(lam - Complex(0, mag)) < 1e-9 * mag) ++pos;
        if (std::abs(lam + Complex(0, mag)) < 1e-9 * mag) ++neg;
    }
    CHECK(pos == 1);
    CHECK(neg == 1);
}

TEST_CASE("commutation classifier: L1 commutes, L2 does not") {
    auto l1 = [](double x) { return std::array<double, 4>{std::sin(x), std::cos(x), std::cos(x), std::sin(x)}; };
    auto l2 = [](double x) { return std::array<double, 4>{std::sin(x), std::sin(x), std::sin(x), std::cos(x)}; };
    auto comm_norm = [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
        // ||AB - BA||_F for row-major 2x2
        const double ab[4] = {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
                              a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
        const double ba[4] = {b[0] * a[0] + b[1] * a[2], b[0] * a[1] + b[1] * a[3],
                              b[2] * a[0] + b[3] * a[2], b[2] * a[1] + b[3] * a[3]};
        double s = 0;
        for (int i = 0; i < 4; ++i) s += (ab[i] - ba[i]) * (ab[i] - ba[i]);
        return std::sqrt(s);
    };
    oracle::Rng rng(41);
    double max_l1 = 0.0, min_l2 = 1e9;
    for (int i = 0; i < 100; ++i) {
        const double x = 5.0 * (rng.next() + 1.0), y = 5.0 * (rng.next() + 1.0);
        max_l1 = std::max(max_l1, comm_norm(l1(x), l1(y)));
        min_l2 = std::min(min_l2, comm_norm(l2(x), l2(y)));
    }
    CHECK(max_l1 <= 1e-14);
    CHECK(min_l2 > 1e-6); // generic points: commutator bounded away from zero
}

TEST_CASE("swe: nonlinear term vanishes when divergence vanishes") {
    SwePlaneConfig cfg;
    cfg.points_x = cfg.points_y = 16;
    auto p = make_swe_plane_problem(cfg);
    State u = p->initial_state(); // balanced: delta = 0
    State n = p->eval_nonlinear(0.0, u);
    CHECK(state_max_abs(n) < 1e-13);
}

TEST_CASE("swe: uniform Phi' and uniform divergence give uniform N_R = -Phi' delta") {
    SwePlaneConfig cfg;
    cfg.points_x = cfg.points_y = 32;
    cfg.balance_amplitude = 0.0;
    cfg.coriolis = 0.0;
    auto p = make_swe_plane_problem(cfg);
    // Phi' = 2, u = sin(2 pi x / Lx) -> delta = (2 pi / Lx) cos(...); N_R = -2 delta
    const Grid2D& g = p->grid2d();
    std::vector<double> phi(g.size(), 2.0), uu(g.size()), vv(g.size(), 0.0);
    for (int iy = 0; iy < g.y.points; ++iy)
        for (int ix = 0; ix < g.x.points; ++ix)
            uu[g.index(ix, iy)] = std::sin(two_pi * g.x.node(ix) / g.x.length);
    State s;
    s.comps.push_back(forward_transform2d(phi, g));
    s.comps.push_back(forward_transform2d(uu, g));
    s.comps.push_back(forward_transform2d(vv, g));
    State n = p->eval_nonlinear(0.0, s);
    auto ng = inverse_transform2d(n.comps[0], g);
    const double kap = two_pi / g.x.length;
    for (int iy = 0; iy < g.y.points; iy += 5)
        for (int ix = 0; ix < g.x.points; ix += 3)
            CHECK(ng[g.index(ix, iy)] ==
                  doctest::Approx(-2.0 * kap * std::cos(kap * g.x.node(ix))).epsilon(1e-10));
}

TEST_CASE("swe: dealiased product matches a fine-grid oracle on retained modes") {
    SwePlaneConfig cfg;
    cfg.points_x = cfg.points_y = 24;
    cfg.balance_amplitude = 0.0;
    cfg.coriolis = 0.0;
    auto p = make_swe_plane_problem(cfg);
    const Grid2D g = p->grid2d();
    const Grid2D fine(PeriodicGrid1D(g.x.length, 2 * g.x.points), PeriodicGrid1D(g.y.length, 2 * g.y.points));

    // band-limited random Phi' and u (modes below the 2/3 cutoff only)
    oracle::Rng rng(71);
    SpectralField phi_s, u_s;
    phi_s.c.assign(g.size(), Complex(0.0));
    u_s.c.assign(g.size(), Complex(0.0));
    const int keep_x = dealias_keep(g.x.points), keep_y = dealias_keep(g.y.points);
    for (int iy = 0; iy < g.y.points; ++iy)
        for (int ix = 0; ix < g.x.points; ++ix) {
            const int mx = std::abs(signed_index(ix, g.x.points));
            const int my = std::abs(signed_index(iy, g.y.points));
            if (mx == 0 && my == 0) continue;
            if (mx > keep_x || my > keep_y) continue;
            phi_s.c[g.index(ix, iy)] = Complex(rng.next(), rng.next()) * 0.1;
            u_s.c[g.index(ix, iy)] = Complex(rng.next(), rng.next()) * 0.1;
        }
    // hermitize so the grid fields are real
    auto hermitize = [&](SpectralField& s) {
        SpectralField h = s;
        for (int iy = 0; iy < g.y.points; ++iy)
            for (int ix = 0; ix < g.x.points; ++ix) {
                const int jx = (g.x.points - ix) % g.x.points;
                const int jy = (g.y.points - iy) % g.y.points;
                h.c[g.index(ix, iy)] = 0.5 * (s.c[g.index(ix, iy)] + std::conj(s.c[g.index(jx, jy)]));
            }
        s = h;
    };
    hermitize(phi_s);
    hermitize(u_s);

    State s;
    s.comps.push_back(phi_s);
    s.comps.push_back(u_s);
    SpectralField zero;
    zero.c.assign(g.size(), Complex(0.0));
    s.comps.push_back(zero);
    State n = p->eval_nonlinear(0.0, s);

    // fine-grid oracle: evaluate -Phi' * du/dx exactly on a 2x finer grid,
    // transform, and restrict to the coarse retained modes
    SpectralField phi_fine, dudx_fine;
    phi_fine.c.assign(fine.size(), Complex(0.0));
    dudx_fine.c.assign(fine.size(), Complex(0.0));
    for (int iy = 0; iy < g.y.points; ++iy)
        for (int ix = 0; ix < g.x.points; ++ix) {
            const int sx = signed_index(ix, g.x.points), sy = signed_index(iy, g.y.points);
            if (std::abs(sx) > keep_x || std::abs(sy) > keep_y) continue;
            const int fx = (sx + fine.x.points) % fine.x.points;
            const int fy = (sy + fine.y.points) % fine.y.points;
            phi_fine.c[fine.index(fx, fy)] = phi_s.c[g.index(ix, iy)];
            const double kap = two_pi * sx / g.x.length;
            dudx_fine.c[fine.index(fx, fy)] = Complex(0.0, kap) * u_s.c[g.index(ix, iy)];
        }
    auto pg = inverse_transform2d_complex(phi_fine, fine);
    auto dg = inverse_transform2d_complex(dudx_fine, fine);
    std::vector<Complex> prod(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) prod[i] = -pg[i] * dg[i];
    auto prod_s = forward_transform2d(prod, fine);

    for (int iy = 0; iy < g.y.points; ++iy)
        for (int ix = 0; ix < g.x.points; ++ix) {
            const int sx = signed_index(ix, g.x.points), sy = signed_index(iy, g.y.points);
            if (std::abs(sx) > keep_x || std::abs(sy) > keep_y) continue;
            const int fx = (sx + fine.x.points) % fine.x.points;
            const int fy = (sy + fine.y.points) % fine.y.points;
            CHECK(std::abs(n.comps[0].c[g.index(ix, iy)] - prod_s.c[fine.index(fx, fy)]) < 1e-10);
        }
}

TEST_CASE("swe: geostrophically balanced state has vanishing Eulerian tendency") {
    SwePlaneConfig cfg;
    cfg.points_x = cfg.points_y = 32;
    auto p = make_swe_plane_problem(cfg);
    State u = p->initial_state();
    State rhs = p->eval_rhs_eulerian(0.0, u);
    CHECK(state_max_abs(rhs) < 1e-10 * std::max(1.0, state_max_abs(u)));
}

TEST_CASE("swe: exact linear propagator conserves the quadratic energy") {
    SwePlaneConfig cfg;
    cfg.points_x = cfg.points_y = 16;
    cfg.bump_amplitude = 0.4;
    auto p = make_swe_plane_problem(cfg);
    State u = p->initial_state();
    const double e0 = swe_quadratic_energy(u, cfg.mean_geopotential);
    State v = u;
    for (int i = 0; i < 5; ++i) v = p->apply_phi(0, 0.37, v);
    const double e1 = swe_quadratic_energy(v, cfg.mean_geopotential);
    CHECK(e1 == doctest::Approx(e0).epsilon(1e-10));
}

TEST_CASE("scalar problem: analytic solution for constant coefficients") {
    auto p = make_problem("scalar-constL", 256);
    // reference from the closed form u(t, x) = e^t u0(x - v t)
    REQUIRE(p->has_analytic_solution());
    State s = p->analytic_state(0.0);
    State s0 = p->initial_state();
    CHECK(state_max_abs(state_sub(s, s0)) < 1e-13);
}

TEST_CASE("scalar problem: RK4 reference matches the closed form for constant L, v") {
    auto p = make_problem("scalar-constL", 512);
    const double t_end = 2.0;
    const long n = 2000;
    State ref = rk4_integrate(*p, p->initial_state(), 0.0, t_end / n, n);
    auto got = p->grid_values(ref);
    auto want = p->grid_values(p->analytic_state(t_end));
    CHECK(compute_error_norm(got, want, Norm::L2) < 1e-8);
}

TEST_CASE("rk4: self-convergence at fourth order on scalar-sinL") {
    auto p = make_problem("scalar-sinL", 256);
    const double t_end = 1.0;
    std::vector<double> dts{0.2, 0.1, 0.05}, errs;
    State fine = rk4_integrate(*p, p->initial_state(), 0.0, t_end / 160, 160);
    auto fine_vals = p->grid_values(fine);
    for (double dt : dts) {
        const long n = std::lround(t_end / dt);
        State u = rk4_integrate(*p, p->initial_state(), 0.0, dt, n);
        errs.push_back(compute_error_norm(p->grid_values(u), fine_vals, Norm::L2));
    }
    const double slope = oracle::slope_loglog(dts, errs);
    CHECK(slope > 3.8);
    CHECK(slope < 4.3);
}

TEST_CASE("rk4: single-mode amplification equals the degree-4 Taylor polynomial") {
    // u' = c u with no advection: one step of RK4 multiplies by the Taylor-4 of e^{c dt}
    ScalarProblemConfig cfg;
    cfg.points = 64;
    cfg.reaction = [](double) { return 0.8; };
    cfg.velocity = [](double, double) { return 0.0; };
    cfg.initial = [](double x) { return std::cos(2.0 * 3.14159265358979324 * x / 10.0); };
    auto p = make_scalar_problem(std::move(cfg));
    const double dt = 0.3, z = 0.8 * dt;
    State u1 = rk4_reference(*p, p->initial_state(), 0.0, dt);
    const double want = 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
    const Complex got = spectral_mode(u1.comps[0], 1) / spectral_mode(p->initial_state().comps[0], 1);
    CHECK(std::abs(got - Complex(want)) < 1e-12);
}

TEST_CASE("rk4: per-step phase error of advected mode is O(dt^5)") {
    // pure advection of a single Fourier mode vs the exact translation factor
    std::vector<double> dts{0.02, 0.01, 0.005}, errs;
    ScalarProblemConfig cfg;
    cfg.points = 64;
    cfg.reaction = [](double) { return 0.0; };
    cfg.velocity = [](double, double) { return 1.0; };
    cfg.initial = [](double x) { return std::cos(3.0 * 2.0 * 3.14159265358979324 * x / 10.0); };
    auto p = make_scalar_problem(std::move(cfg));
    const double kappa = 3.0 * two_pi / 10.0;
    for (double dt : dts) {
        State u1 = rk4_reference(*p, p->initial_state(), 0.0, dt);
        const Complex got = spectral_mode(u1.comps[0], 3) / spectral_mode(p->initial_state().comps[0], 3);
        const Complex wanted = std::exp(Complex(0.0, -kappa * dt));
        errs.push_back(std::abs(got - wanted));
    }
    const double slope = oracle::slope_loglog(dts, errs);
    CHECK(slope > 4.7);
    CHECK(slope < 5.3);
}

TEST_CASE("pure advection transports values: min/max preserved to interpolation accuracy") {
    ScalarProblemConfig cfg;
    cfg.points = 2048;
    cfg.reaction = [](double) { return 0.0; };
    cfg.velocity = [](double, double) { return 0.777; };
    cfg.initial = [](double x) {
        const double d = x - 5.0;
        return std::exp(-d * d / 0.5);
    };
    auto p = make_scalar_problem(std::move(cfg));
    SchemeConfig sc;
    sc.scheme = Scheme::SE22;
    sc.dt = 0.05;
    StepState s = bootstrap_state(sc, *p, p->initial_state());
    s = integrate(sc, *p, std::move(s), 40);
    auto vals = p->grid_values(s.u);
    double mx = -1e30, mn = 1e30;
    for (double v : vals) {
        mx = std::max(mx, v);
        mn = std::min(mn, v);
    }
    CHECK(mx == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(std::abs(mn) < 1e-5);
}
