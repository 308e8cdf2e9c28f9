#pragma once

#include <complex>
#include <vector>

#include "slexp/grid.hpp"
#include "slexp/smallmat.hpp"

namespace slexp {

// Fourier coefficients of one field, normalization u_hat_k = (1/P) sum_j u_j e^{-i kappa x_j}.
//
// 1D storage is the plain DFT layout c[k], k = 0..P-1, where k > P/2 carries
// the negative wavenumber k - P. mode(k) accepts k in [-M, M] with M = P/2;
// mode(-M) aliases mode(M), mirroring the aliasing of node P onto node 0.
// For real fields the coefficients are conjugate-symmetric.
//
// The same container holds 2D spectra (size Px*Py, kx fastest); the grid
// dimensions always travel alongside.
struct SpectralField {
    std::vector<Complex> c;

    std::size_t size() const { return c.size(); }
};

// signed wavenumber index for slot k of an n-point transform
inline int signed_index(int k, int n) { return (k <= n / 2) ? k : k - n; }

// ---- 1D transform pair -----------------------------------------------------

SpectralField forward_transform(const std::vector<double>& f, const PeriodicGrid1D& grid);
SpectralField forward_transform(const std::vector<Complex>& f, const PeriodicGrid1D& grid);
std::vector<double> inverse_transform(const SpectralField& s, const PeriodicGrid1D& grid);
std::vector<Complex> inverse_transform_complex(const SpectralField& s, const PeriodicGrid1D& grid);

// mode accessor, k in [-P/2, P/2]
Complex spectral_mode(const SpectralField& s, int k);

// d^order/dx^order: mode k multiplied by (i*kappa)^order, kappa = 2*pi*k/L.
// The Nyquist slot is zeroed for odd orders (its +-M alias is sign-ambiguous).
// order in 1..8.
SpectralField spectral_derivative(const SpectralField& s, const PeriodicGrid1D& grid, int order);

// ---- 2D transform pair -----------------------------------------------------

SpectralField forward_transform2d(const std::vector<double>& f, const Grid2D& grid);
SpectralField forward_transform2d(const std::vector<Complex>& f, const Grid2D& grid);
std::vector<double> inverse_transform2d(const SpectralField& s, const Grid2D& grid);
std::vector<Complex> inverse_transform2d_complex(const SpectralField& s, const Grid2D& grid);

// partial derivative along axis 0 (x) or 1 (y)
SpectralField spectral_derivative2d(const SpectralField& s, const Grid2D& grid, int axis, int order);

// 2/3-rule dealiasing: zero all modes with |k| > dealias_keep(P) (per axis in
// 2D). The cutoff satisfies 3*keep < P so no retained product mode aliases
// onto a retained slot.
int dealias_keep(int n);
void dealias(SpectralField& s, const PeriodicGrid1D& grid);
void dealias2d(SpectralField& s, const Grid2D& grid);

// ---- low-level engine (exposed for tests/benchmarks) ------------------------

// In-place DFT of length n (sign = -1 forward, +1 inverse), no normalization.
// Radix-2 for powers of two, direct O(n^2) summation otherwise.
void dft_inplace(Complex* data, int n, int sign);

// Direct O(n^2) reference used as the serial/naive oracle path.
void dft_direct(const Complex* in, Complex* out, int n, int sign);

} // namespace slexp
