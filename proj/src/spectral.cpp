#include "slexp/spectral.hpp"

#include <algorithm>
#include <cmath>

namespace slexp {

namespace {

constexpr double two_pi = 6.283185307179586476925286766559;

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

void fft_radix2(Complex* a, int n, int sign) {
    // bit-reversal permutation
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        const double ang = sign * two_pi / len;
        const Complex wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            Complex w(1.0);
            for (int j = 0; j < len / 2; ++j) {
                Complex u = a[i + j];
                Complex v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

} // namespace

void dft_direct(const Complex* in, Complex* out, int n, int sign) {
    for (int k = 0; k < n; ++k) {
        Complex s = 0.0;
        for (int j = 0; j < n; ++j) {
            const double ang = sign * two_pi * static_cast<double>(k) * static_cast<double>(j) / n;
            s += in[j] * Complex(std::cos(ang), std::sin(ang));
        }
        out[k] = s;
    }
}

void dft_inplace(Complex* data, int n, int sign) {
    if (is_pow2(n)) {
        fft_radix2(data, n, sign);
        return;
    }
    std::vector<Complex> tmp(data, data + n);
    dft_direct(tmp.data(), data, n, sign);
}

SpectralField forward_transform(const std::vector<Complex>& f, const PeriodicGrid1D& grid) {
    if (static_cast<int>(f.size()) != grid.points)
        throw DimensionError("forward_transform: field length != grid points");
    SpectralField s;
    s.c = f;
    dft_inplace(s.c.data(), grid.points, -1);
    const double inv = 1.0 / grid.points;
    for (auto& z : s.c) z *= inv;
    return s;
}

SpectralField forward_transform(const std::vector<double>& f, const PeriodicGrid1D& grid) {
    std::vector<Complex> cf(f.begin(), f.end());
    return forward_transform(cf, grid);
}

std::vector<Complex> inverse_transform_complex(const SpectralField& s, const PeriodicGrid1D& grid) {
    if (static_cast<int>(s.size()) != grid.points)
        throw DimensionError("inverse_transform: coefficient count != grid points");
    std::vector<Complex> f = s.c;
    dft_inplace(f.data(), grid.points, +1);
    return f;
}

std::vector<double> inverse_transform(const SpectralField& s, const PeriodicGrid1D& grid) {
    auto f = inverse_transform_complex(s, grid);
    std::vector<double> r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i].real();
    return r;
}

Complex spectral_mode(const SpectralField& s, int k) {
    const int n = static_cast<int>(s.size());
    const int m = n / 2;
    if (k < -m || k > m) throw DimensionError("spectral_mode: wavenumber out of range");
    int slot = (k >= 0) ? k : k + n;
    if (k == -m) slot = m; // alias
    return s.c[static_cast<std::size_t>(slot)];
}

SpectralField spectral_derivative(const SpectralField& s, const PeriodicGrid1D& grid, int order) {
    if (order < 1 || order > 8) throw InvalidInputError("spectral_derivative: order must be 1..8");
    if (static_cast<int>(s.size()) != grid.points)
        throw DimensionError("spectral_derivative: coefficient count != grid points");
    const int n = grid.points;
    SpectralField r = s;
    for (int k = 0; k < n; ++k) {
        if (k == n / 2 && order % 2 == 1) {
            r.c[static_cast<std::size_t>(k)] = 0.0;
            continue;
        }
        const double kappa = two_pi * signed_index(k, n) / grid.length;
        Complex mult = 1.0;
        const Complex ik(0.0, kappa);
        for (int p = 0; p < order; ++p) mult *= ik;
        r.c[static_cast<std::size_t>(k)] *= mult;
    }
    return r;
}

int dealias_keep(int n) { return (n - 1) / 3; }

void dealias(SpectralField& s, const PeriodicGrid1D& grid) {
    const int n = grid.points;
    const int keep = dealias_keep(n);
    for (int k = 0; k < n; ++k)
        if (std::abs(signed_index(k, n)) > keep) s.c[static_cast<std::size_t>(k)] = 0.0;
}

// ---- 2D ---------------------------------------------------------------------

namespace {

// transform along both axes; sign -1 forward (then caller scales), +1 inverse
void transform2d_inplace(std::vector<Complex>& c, const Grid2D& g, int sign) {
    const int px = g.x.points, py = g.y.points;
    // rows (x direction)
#pragma omp parallel for schedule(static)
    for (int iy = 0; iy < py; ++iy) dft_inplace(c.data() + static_cast<std::size_t>(iy) * px, px, sign);
    // columns (y direction)
#pragma omp parallel for schedule(static)
    for (int ix = 0; ix < px; ++ix) {
        std::vector<Complex> col(static_cast<std::size_t>(py));
        for (int iy = 0; iy < py; ++iy) col[static_cast<std::size_t>(iy)] = c[g.index(ix, iy)];
        dft_inplace(col.data(), py, sign);
        for (int iy = 0; iy < py; ++iy) c[g.index(ix, iy)] = col[static_cast<std::size_t>(iy)];
    }
}

} // namespace

SpectralField forward_transform2d(const std::vector<Complex>& f, const Grid2D& grid) {
    if (f.size() != grid.size()) throw DimensionError("forward_transform2d: field size != grid size");
    SpectralField s;
    s.c = f;
    transform2d_inplace(s.c, grid, -1);
    const double inv = 1.0 / static_cast<double>(grid.size());
    for (auto& z : s.c) z *= inv;
    return s;
}

SpectralField forward_transform2d(const std::vector<double>& f, const Grid2D& grid) {
    std::vector<Complex> cf(f.begin(), f.end());
    return forward_transform2d(cf, grid);
}

std::vector<Complex> inverse_transform2d_complex(const SpectralField& s, const Grid2D& grid) {
    if (s.size() != grid.size()) throw DimensionError("inverse_transform2d: size mismatch");
    std::vector<Complex> f = s.c;
    transform2d_inplace(f, grid, +1);
    return f;
}

std::vector<double> inverse_transform2d(const SpectralField& s, const Grid2D& grid) {
    auto f = inverse_transform2d_complex(s, grid);
    std::vector<double> r(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) r[i] = f[i].real();
    return r;
}

SpectralField spectral_derivative2d(const SpectralField& s, const Grid2D& grid, int axis, int order) {
    if (order < 1 || order > 8) throw InvalidInputError("spectral_derivative2d: order must be 1..8");
    if (axis != 0 && axis != 1) throw InvalidInputError("spectral_derivative2d: axis must be 0 or 1");
    if (s.size() != grid.size()) throw DimensionError("spectral_derivative2d: size mismatch");
    const int px = grid.x.points, py = grid.y.points;
    const int n = (axis == 0) ? px : py;
    const double len = (axis == 0) ? grid.x.length : grid.y.length;
    SpectralField r = s;
    for (int iy = 0; iy < py; ++iy)
        for (int ix = 0; ix < px; ++ix) {
            const int k = (axis == 0) ? ix : iy;
            Complex& z = r.c[grid.index(ix, iy)];
            if (k == n / 2 && order % 2 == 1) {
                z = 0.0;
                continue;
            }
            const double kappa = two_pi * signed_index(k, n) / len;
            Complex mult = 1.0;
            const Complex ik(0.0, kappa);
            for (int p = 0; p < order; ++p) mult *= ik;
            z *= mult;
        }
    return r;
}

void dealias2d(SpectralField& s, const Grid2D& grid) {
    const int px = grid.x.points, py = grid.y.points;
    const int keepx = dealias_keep(px), keepy = dealias_keep(py);
    for (int iy = 0; iy < py; ++iy)
        for (int ix = 0; ix < px; ++ix)
            if (std::abs(signed_index(ix, px)) > keepx || std::abs(signed_index(iy, py)) > keepy)
                s.c[grid.index(ix, iy)] = 0.0;
}

} // namespace slexp
