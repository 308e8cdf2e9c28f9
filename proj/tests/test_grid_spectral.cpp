#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "slexp/interp.hpp"
#include "slexp/spectral.hpp"

using namespace slexp;

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

std::vector<double> random_field(const PeriodicGrid1D& g, std::uint64_t seed) {
    oracle::Rng rng(seed);
    std::vector<double> f(static_cast<std::size_t>(g.points));
    for (auto& v : f) v = rng.next();
    return f;
}

} // namespace

TEST_CASE("grid: invariants") {
    CHECK_THROWS_AS(PeriodicGrid1D(10.0, 5), InvalidInputError);
    CHECK_THROWS_AS(PeriodicGrid1D(-1.0, 8), InvalidInputError);
    PeriodicGrid1D g(10.0, 2048);
    CHECK(g.dx() * g.points == 10.0);
    CHECK(g.node(0) == 0.0);
    CHECK(g.wrap(-0.25) == doctest::Approx(9.75));
    CHECK(g.wrap(10.0) == 0.0);
}

TEST_CASE("transform: constant field concentrates in mode 0") {
    PeriodicGrid1D g(10.0, 64);
    std::vector<double> f(64, 3.25);
    auto s = forward_transform(f, g);
    CHECK(std::abs(spectral_mode(s, 0) - Complex(3.25)) < 1e-14);
    for (int k = 1; k <= 32; ++k) CHECK(std::abs(spectral_mode(s, k)) < 1e-14);
}

TEST_CASE("transform: cosine splits into modes +-1 with weight 1/2") {
    PeriodicGrid1D g(10.0, 128);
    std::vector<double> f(128);
    for (int i = 0; i < 128; ++i) f[static_cast<std::size_t>(i)] = std::cos(two_pi * g.node(i) / g.length);
    auto s = forward_transform(f, g);
    CHECK(std::abs(spectral_mode(s, 1) - Complex(0.5)) < 1e-14);
    CHECK(std::abs(spectral_mode(s, -1) - Complex(0.5)) < 1e-14);
    CHECK(std::abs(spectral_mode(s, 2)) < 1e-14);
}

TEST_CASE("transform: matches the direct O(P^2) summation oracle") {
    PeriodicGrid1D g(10.0, 256);
    auto f = random_field(g, 99);
    auto s = forward_transform(f, g);
    // independent path: naive summation with the same 1/P normalization
    std::vector<Complex> in(f.begin(), f.end()), want(f.size());
    dft_direct(in.data(), want.data(), g.points, -1);
    for (auto& z : want) z /= g.points;
    for (int k = 0; k < g.points; ++k)
        CHECK(std::abs(s.c[static_cast<std::size_t>(k)] - want[static_cast<std::size_t>(k)]) < 1e-12);
}

TEST_CASE("transform: round trip and Parseval") {
    PeriodicGrid1D g(10.0, 512);
    auto f = random_field(g, 5);
    auto s = forward_transform(f, g);
    auto back = inverse_transform(s, g);
    double sum_f = 0.0, sum_c = 0.0;
    for (int i = 0; i < g.points; ++i) {
        CHECK(std::abs(back[static_cast<std::size_t>(i)] - f[static_cast<std::size_t>(i)]) < 1e-12);
        sum_f += f[static_cast<std::size_t>(i)] * f[static_cast<std::size_t>(i)];
    }
    for (const auto& z : s.c) sum_c += std::norm(z);
    CHECK(sum_f / g.points == doctest::Approx(sum_c).epsilon(1e-12));
}

TEST_CASE("transform: conjugate symmetry for real fields, preserved by derivative") {
    PeriodicGrid1D g(7.0, 128);
    auto f = random_field(g, 17);
    auto s = forward_transform(f, g);
    auto d = spectral_derivative(s, g, 1);
    for (int k = 1; k < 64; ++k) {
        CHECK(std::abs(spectral_mode(s, -k) - std::conj(spectral_mode(s, k))) < 1e-13);
        CHECK(std::abs(spectral_mode(d, -k) - std::conj(spectral_mode(d, k))) < 1e-12);
    }
}

TEST_CASE("transform: size mismatch raises") {
    PeriodicGrid1D g(10.0, 64);
    std::vector<double> wrong(63, 0.0);
    CHECK_THROWS_AS(forward_transform(wrong, g), DimensionError);
}

TEST_CASE("transform: mode -M aliases mode M, out-of-range wavenumbers rejected") {
    PeriodicGrid1D g(10.0, 64);
    auto s = forward_transform(random_field(g, 123), g);
    CHECK(spectral_mode(s, -32) == spectral_mode(s, 32));
    CHECK_THROWS_AS(spectral_mode(s, 33), DimensionError);
}

TEST_CASE("derivative: sine differentiates exactly at nodes") {
    PeriodicGrid1D g(10.0, 64);
    const double kappa = two_pi / g.length;
    std::vector<double> f(64);
    for (int i = 0; i < 64; ++i) f[static_cast<std::size_t>(i)] = std::sin(kappa * g.node(i));
    auto d = inverse_transform(spectral_derivative(forward_transform(f, g), g, 1), g);
    for (int i = 0; i < 64; ++i)
        CHECK(d[static_cast<std::size_t>(i)] == doctest::Approx(kappa * std::cos(kappa * g.node(i))).epsilon(1e-12));
}

TEST_CASE("derivative: second derivative of a constant vanishes") {
    PeriodicGrid1D g(10.0, 32);
    std::vector<double> f(32, 4.0);
    auto d = inverse_transform(spectral_derivative(forward_transform(f, g), g, 2), g);
    for (double v : d) CHECK(std::abs(v) < 1e-13);
}

TEST_CASE("derivative: 4th derivative of a band-limited field vs symbolic oracle") {
    PeriodicGrid1D g(10.0, 128);
    // explicit trigonometric sum with known coefficients
    oracle::Rng rng(3);
    std::vector<double> a(8), b(8);
    for (int m = 0; m < 8; ++m) {
        a[static_cast<std::size_t>(m)] = rng.next();
        b[static_cast<std::size_t>(m)] = rng.next();
    }
    std::vector<double> f(static_cast<std::size_t>(g.points), 0.0);
    for (int i = 0; i < g.points; ++i)
        for (int m = 1; m <= 8; ++m) {
            const double kap = two_pi * m / g.length;
            f[static_cast<std::size_t>(i)] += a[static_cast<std::size_t>(m - 1)] * std::cos(kap * g.node(i)) +
                                              b[static_cast<std::size_t>(m - 1)] * std::sin(kap * g.node(i));
        }
    auto d4 = inverse_transform(spectral_derivative(forward_transform(f, g), g, 4), g);
    for (int i = 0; i < g.points; ++i) {
        double want = 0.0;
        for (int m = 1; m <= 8; ++m) {
            const double kap = two_pi * m / g.length;
            // the 4th derivative of cos, sin is kappa^4 times the same function
            want += std::pow(kap, 4) * (a[static_cast<std::size_t>(m - 1)] * std::cos(kap * g.node(i)) +
                                        b[static_cast<std::size_t>(m - 1)] * std::sin(kap * g.node(i)));
        }
        CHECK(d4[static_cast<std::size_t>(i)] == doctest::Approx(want).epsilon(1e-9));
    }
}

TEST_CASE("derivative: order bounds enforced") {
    PeriodicGrid1D g(10.0, 32);
    auto s = forward_transform(std::vector<double>(32, 1.0), g);
    CHECK_THROWS_AS(spectral_derivative(s, g, 0), InvalidInputError);
    CHECK_THROWS_AS(spectral_derivative(s, g, 9), InvalidInputError);
}

TEST_CASE("interp: nodal targets return nodal values bit-exact") {
    PeriodicGrid1D g(10.0, 2048);
    auto f = random_field(g, 21);
    std::vector<double> targets(static_cast<std::size_t>(g.points));
    for (int i = 0; i < g.points; ++i) targets[static_cast<std::size_t>(i)] = g.node(i);
    auto vals = interp_cubic(f, g, targets);
    for (int i = 0; i < g.points; ++i)
        CHECK(vals[static_cast<std::size_t>(i)] == f[static_cast<std::size_t>(i)]); // bit-exact
}

TEST_CASE("interp: constant field is reproduced at arbitrary targets") {
    PeriodicGrid1D g(10.0, 64);
    std::vector<double> f(64, -2.5);
    std::vector<double> targets{0.013, 3.7, 9.999, -1.2, 15.3};
    for (double v : interp_cubic(f, g, targets)) CHECK(v == doctest::Approx(-2.5).epsilon(1e-15));
}

TEST_CASE("interp: fourth-order convergence on a smooth field") {
    std::vector<double> hs, errs;
    for (int p : {64, 128, 256, 512}) {
        PeriodicGrid1D g(10.0, p);
        std::vector<double> f(static_cast<std::size_t>(p));
        for (int i = 0; i < p; ++i) f[static_cast<std::size_t>(i)] = std::sin(two_pi * g.node(i) / g.length);
        std::vector<double> targets;
        for (int i = 0; i < p; ++i) targets.push_back(g.node(i) + 0.37 * g.dx());
        auto vals = interp_cubic(f, g, targets);
        double err = 0.0;
        for (int i = 0; i < p; ++i)
            err = std::max(err, std::abs(vals[static_cast<std::size_t>(i)] -
                                         std::sin(two_pi * targets[static_cast<std::size_t>(i)] / g.length)));
        hs.push_back(g.dx());
        errs.push_back(err);
    }
    const double slope = oracle::slope_loglog(hs, errs);
    CHECK(slope > 3.8);
    CHECK(slope < 4.2);
}

TEST_CASE("interp: exact for cubics on one period segment") {
    PeriodicGrid1D g(16.0, 16);
    // local cubic in the interior, away from the wrap
    auto cubic = [](double x) { return 0.5 + 1.5 * x - 0.25 * x * x + 0.0625 * x * x * x; };
    std::vector<double> f(16);
    for (int i = 0; i < 16; ++i) f[static_cast<std::size_t>(i)] = cubic(g.node(i));
    std::vector<double> targets{5.3, 6.75, 7.01, 8.5};
    auto vals = interp_cubic(f, g, targets);
    for (std::size_t i = 0; i < targets.size(); ++i)
        CHECK(vals[i] == doctest::Approx(cubic(targets[i])).epsilon(1e-12));
}

TEST_CASE("interp: parallel equals serial bitwise") {
    PeriodicGrid1D g(10.0, 1024);
    auto f = random_field(g, 33);
    std::vector<double> targets;
    oracle::Rng rng(34);
    for (int i = 0; i < 5000; ++i) targets.push_back(5.0 + 5.0 * rng.next());
    auto a = interp_cubic(f, g, targets);
    auto b = interp_cubic_serial(f, g, targets);
    for (std::size_t i = 0; i < targets.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("interp: reproduces inverse_transform values at nodes exactly") {
    PeriodicGrid1D g(10.0, 256);
    auto f = random_field(g, 55);
    auto grid_vals = inverse_transform(forward_transform(f, g), g);
    std::vector<double> targets;
    for (int i = 0; i < g.points; ++i) targets.push_back(g.node(i));
    auto vals = interp_cubic(grid_vals, g, targets);
    for (int i = 0; i < g.points; ++i)
        CHECK(vals[static_cast<std::size_t>(i)] == grid_vals[static_cast<std::size_t>(i)]);
}

TEST_CASE("2d transform: round trip and tensor derivative") {
    Grid2D g(PeriodicGrid1D(10.0, 32), PeriodicGrid1D(5.0, 16));
    oracle::Rng rng(77);
    std::vector<double> f(g.size());
    for (auto& v : f) v = rng.next();
    auto s = forward_transform2d(f, g);
    auto back = inverse_transform2d(s, g);
    for (std::size_t i = 0; i < f.size(); ++i) CHECK(std::abs(back[i] - f[i]) < 1e-12);

    std::vector<double> fy(g.size());
    for (int iy = 0; iy < 16; ++iy)
        for (int ix = 0; ix < 32; ++ix)
            fy[g.index(ix, iy)] = std::sin(two_pi * g.y.node(iy) / g.y.length);
    auto dy = inverse_transform2d(spectral_derivative2d(forward_transform2d(fy, g), g, 1, 1), g);
    const double kap = two_pi / g.y.length;
    for (int iy = 0; iy < 16; ++iy)
        for (int ix = 0; ix < 32; ++ix)
            CHECK(dy[g.index(ix, iy)] == doctest::Approx(kap * std::cos(kap * g.y.node(iy))).epsilon(1e-11));
}

TEST_CASE("2d interp: node hit is bit-exact, off-node accurate, serial identical") {
    Grid2D g(PeriodicGrid1D(10.0, 64), PeriodicGrid1D(10.0, 64));
    std::vector<double> f(g.size());
    for (int iy = 0; iy < 64; ++iy)
        for (int ix = 0; ix < 64; ++ix)
            f[g.index(ix, iy)] = std::sin(two_pi * g.x.node(ix) / 10.0) * std::cos(two_pi * g.y.node(iy) / 10.0);
    std::vector<double> xs{g.x.node(7)}, ys{g.y.node(9)};
    auto v = interp_bicubic(f, g, xs, ys);
    CHECK(v[0] == f[g.index(7, 9)]);

    xs[0] = 3.21;
    ys[0] = 7.89;
    auto w = interp_bicubic(f, g, xs, ys);
    CHECK(w[0] == doctest::Approx(std::sin(two_pi * 3.21 / 10.0) * std::cos(two_pi * 7.89 / 10.0)).epsilon(1e-4));
    auto ws = interp_bicubic_serial(f, g, xs, ys);
    CHECK(w[0] == ws[0]);
}

TEST_CASE("dealias: 2/3 rule zeroes the top third") {
    PeriodicGrid1D g(10.0, 32);
    auto f = random_field(g, 91);
    auto s = forward_transform(f, g);
    dealias(s, g);
    for (int k = 0; k < 32; ++k) {
        const int m = std::abs(signed_index(k, 32));
        if (m > 10) CHECK(std::abs(s.c[static_cast<std::size_t>(k)]) == 0.0);
    }
}
