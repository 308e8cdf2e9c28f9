#pragma once

#include <complex>
#include <vector>

#include "slexp/grid.hpp"
#include "slexp/smallmat.hpp"

namespace slexp {

// Cubic Lagrange weights for a fractional offset alpha in [0, 1] on the
// stencil offsets {-1, 0, 1, 2}. At alpha = 0 or 1 the weights are exactly
// {0,1,0,0} / {0,0,1,0}, so on-node targets reproduce nodal values bit-exact.
struct CubicWeights {
    double w[4];
};

inline CubicWeights cubic_lagrange_weights(double alpha) {
    const double am1 = alpha + 1.0, a0 = alpha, a1 = alpha - 1.0, a2 = alpha - 2.0;
    CubicWeights w;
    w.w[0] = -a0 * a1 * a2 / 6.0;
    w.w[2] = -am1 * a0 * a2 / 2.0;
    w.w[3] = am1 * a0 * a1 / 6.0;
    // anchor weight closes the partition of unity exactly, so constant fields
    // are reproduced without rounding residue
    w.w[1] = 1.0 - w.w[0] - w.w[2] - w.w[3];
    return w;
}

// Single-point evaluations (periodic wrap, same stencil/anchor rules as the
// batch versions below).
double interp_cubic_at(const std::vector<double>& f, const PeriodicGrid1D& grid, double x);
double interp_linear_at(const std::vector<double>& f, const PeriodicGrid1D& grid, double x);
double interp_bicubic_at(const std::vector<double>& f, const Grid2D& grid, double x, double y);

// 4-point periodic cubic Lagrange interpolation of f at arbitrary positions.
// Targets are wrapped into [0, L); the stencil is anchored so that the two
// nearest nodes bracket the target (the anchor node is the nearest node to
// the right; a target exactly on a node returns that node's value bit-exact).
std::vector<double> interp_cubic(const std::vector<double>& f, const PeriodicGrid1D& grid,
                                 const std::vector<double>& targets);
std::vector<Complex> interp_cubic(const std::vector<Complex>& f, const PeriodicGrid1D& grid,
                                  const std::vector<double>& targets);

// Serial reference implementations (identical arithmetic, no threading).
std::vector<double> interp_cubic_serial(const std::vector<double>& f, const PeriodicGrid1D& grid,
                                        const std::vector<double>& targets);
std::vector<Complex> interp_cubic_serial(const std::vector<Complex>& f, const PeriodicGrid1D& grid,
                                         const std::vector<double>& targets);

// Tensor-product bicubic Lagrange interpolation on the biperiodic plane.
std::vector<double> interp_bicubic(const std::vector<double>& f, const Grid2D& grid,
                                   const std::vector<double>& xs, const std::vector<double>& ys);
std::vector<Complex> interp_bicubic(const std::vector<Complex>& f, const Grid2D& grid,
                                    const std::vector<double>& xs, const std::vector<double>& ys);
std::vector<double> interp_bicubic_serial(const std::vector<double>& f, const Grid2D& grid,
                                          const std::vector<double>& xs, const std::vector<double>& ys);
std::vector<Complex> interp_bicubic_serial(const std::vector<Complex>& f, const Grid2D& grid,
                                           const std::vector<double>& xs, const std::vector<double>& ys);

} // namespace slexp
