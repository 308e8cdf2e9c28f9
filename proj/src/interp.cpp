#include "slexp/interp.hpp"

#include <cmath>

namespace slexp {

namespace {

template <typename T>
inline T interp_one(const std::vector<T>& f, const PeriodicGrid1D& grid, double x) {
    const int n = grid.points;
    const double w = grid.wrap(x);
    double p = w / grid.dx();
    if (p >= n) p -= n; // wrap(x) can land on L through rounding
    int j0 = static_cast<int>(p);
    if (j0 >= n) j0 -= n;
    const double alpha = p - j0;
    const CubicWeights cw = cubic_lagrange_weights(alpha);
    const int jm1 = (j0 - 1 + n) % n;
    const int jp1 = (j0 + 1) % n;
    const int jp2 = (j0 + 2) % n;
    // factored with sum(w) = 1: constant fields are reproduced bit-exact
    const T anchor = f[static_cast<std::size_t>(j0)];
    return anchor + cw.w[0] * (f[static_cast<std::size_t>(jm1)] - anchor) +
           cw.w[2] * (f[static_cast<std::size_t>(jp1)] - anchor) +
           cw.w[3] * (f[static_cast<std::size_t>(jp2)] - anchor);
}

template <typename T>
std::vector<T> interp_batch(const std::vector<T>& f, const PeriodicGrid1D& grid,
                            const std::vector<double>& targets, bool parallel) {
    if (static_cast<int>(f.size()) != grid.points)
        throw DimensionError("interp_cubic: field length != grid points");
    std::vector<T> out(targets.size());
    const long nt = static_cast<long>(targets.size());
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < nt; ++i)
            out[static_cast<std::size_t>(i)] = interp_one(f, grid, targets[static_cast<std::size_t>(i)]);
    } else {
        for (long i = 0; i < nt; ++i)
            out[static_cast<std::size_t>(i)] = interp_one(f, grid, targets[static_cast<std::size_t>(i)]);
    }
    return out;
}

template <typename T>
inline T interp_one_2d(const std::vector<T>& f, const Grid2D& grid, double x, double y) {
    const int nx = grid.x.points, ny = grid.y.points;
    double px = grid.x.wrap(x) / grid.x.dx();
    double py = grid.y.wrap(y) / grid.y.dx();
    if (px >= nx) px -= nx;
    if (py >= ny) py -= ny;
    int ix = static_cast<int>(px);
    int iy = static_cast<int>(py);
    if (ix >= nx) ix -= nx;
    if (iy >= ny) iy -= ny;
    const CubicWeights wx = cubic_lagrange_weights(px - ix);
    const CubicWeights wy = cubic_lagrange_weights(py - iy);
    T rows[4];
    for (int b = 0; b < 4; ++b) {
        const int jy = (iy + b - 1 + ny) % ny;
        const T anchor = f[grid.index(ix, jy)];
        rows[b] = anchor + wx.w[0] * (f[grid.index((ix - 1 + nx) % nx, jy)] - anchor) +
                  wx.w[2] * (f[grid.index((ix + 1) % nx, jy)] - anchor) +
                  wx.w[3] * (f[grid.index((ix + 2) % nx, jy)] - anchor);
    }
    return rows[1] + wy.w[0] * (rows[0] - rows[1]) + wy.w[2] * (rows[2] - rows[1]) +
           wy.w[3] * (rows[3] - rows[1]);
}

template <typename T>
std::vector<T> interp_batch_2d(const std::vector<T>& f, const Grid2D& grid, const std::vector<double>& xs,
                               const std::vector<double>& ys, bool parallel) {
    if (f.size() != grid.size()) throw DimensionError("interp_bicubic: field size != grid size");
    if (xs.size() != ys.size()) throw DimensionError("interp_bicubic: target coordinate count mismatch");
    std::vector<T> out(xs.size());
    const long nt = static_cast<long>(xs.size());
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (long i = 0; i < nt; ++i)
            out[static_cast<std::size_t>(i)] =
                interp_one_2d(f, grid, xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(i)]);
    } else {
        for (long i = 0; i < nt; ++i)
            out[static_cast<std::size_t>(i)] =
                interp_one_2d(f, grid, xs[static_cast<std::size_t>(i)], ys[static_cast<std::size_t>(i)]);
    }
    return out;
}

} // namespace

double interp_cubic_at(const std::vector<double>& f, const PeriodicGrid1D& grid, double x) {
    return interp_one(f, grid, x);
}

double interp_linear_at(const std::vector<double>& f, const PeriodicGrid1D& grid, double x) {
    const int n = grid.points;
    double p = grid.wrap(x) / grid.dx();
    if (p >= n) p -= n;
    int j0 = static_cast<int>(p);
    if (j0 >= n) j0 -= n;
    const double alpha = p - j0;
    const double anchor = f[static_cast<std::size_t>(j0)];
    return anchor + alpha * (f[static_cast<std::size_t>((j0 + 1) % n)] - anchor);
}

double interp_bicubic_at(const std::vector<double>& f, const Grid2D& grid, double x, double y) {
    return interp_one_2d(f, grid, x, y);
}

std::vector<double> interp_cubic(const std::vector<double>& f, const PeriodicGrid1D& grid,
                                 const std::vector<double>& targets) {
    return interp_batch(f, grid, targets, true);
}
std::vector<Complex> interp_cubic(const std::vector<Complex>& f, const PeriodicGrid1D& grid,
                                  const std::vector<double>& targets) {
    return interp_batch(f, grid, targets, true);
}
std::vector<double> interp_cubic_serial(const std::vector<double>& f, const PeriodicGrid1D& grid,
                                        const std::vector<double>& targets) {
    return interp_batch(f, grid, targets, false);
}
std::vector<Complex> interp_cubic_serial(const std::vector<Complex>& f, const PeriodicGrid1D& grid,
                                         const std::vector<double>& targets) {
    return interp_batch(f, grid, targets, false);
}

std::vector<double> interp_bicubic(const std::vector<double>& f, const Grid2D& grid,
                                   const std::vector<double>& xs, const std::vector<double>& ys) {
    return interp_batch_2d(f, grid, xs, ys, true);
}
std::vector<Complex> interp_bicubic(const std::vector<Complex>& f, const Grid2D& grid,
                                    const std::vector<double>& xs, const std::vector<double>& ys) {
    return interp_batch_2d(f, grid, xs, ys, true);
}
std::vector<double> interp_bicubic_serial(const std::vector<double>& f, const Grid2D& grid,
                                          const std::vector<double>& xs, const std::vector<double>& ys) {
    return interp_batch_2d(f, grid, xs, ys, false);
}
std::vector<Complex> interp_bicubic_serial(const std::vector<Complex>& f, const Grid2D& grid,
                                           const std::vector<double>& xs, const std::vector<double>& ys) {
    return interp_batch_2d(f, grid, xs, ys, false);
}

} // namespace slexp
