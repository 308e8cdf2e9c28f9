#pragma once

#include <cmath>
#include <vector>

#include "slexp/errors.hpp"

namespace slexp {

// Uniform periodic grid on [0, L) with P unique nodes x_i = L*i/P
// (node P aliases node 0).
struct PeriodicGrid1D {
    double length = 0.0;
    int points = 0;

    PeriodicGrid1D() = default;
    PeriodicGrid1D(double L, int P) : length(L), points(P) {
        if (!(L > 0.0) || !std::isfinite(L)) throw InvalidInputError("PeriodicGrid1D: length must be positive");
        if (P < 4 || P % 2 != 0) throw InvalidInputError("PeriodicGrid1D: points must be even and >= 4");
    }

    double dx() const { return length / points; }
    double node(int i) const { return length * i / points; }
    int truncation() const { return points / 2; }

    // wrap an arbitrary coordinate into [0, L)
    double wrap(double x) const {
        double w = x - std::floor(x / length) * length;
        if (w >= length) w -= length;
        return w;
    }
};

// Tensor-product biperiodic grid; fields are stored row-major with the
// x-index fastest: value(ix, iy) = data[iy * x.points + ix].
struct Grid2D {
    PeriodicGrid1D x;
    PeriodicGrid1D y;

    Grid2D() = default;
    Grid2D(PeriodicGrid1D gx, PeriodicGrid1D gy) : x(gx), y(gy) {}

    std::size_t size() const { return static_cast<std::size_t>(x.points) * static_cast<std::size_t>(y.points); }
    std::size_t index(int ix, int iy) const {
        return static_cast<std::size_t>(iy) * static_cast<std::size_t>(x.points) + static_cast<std::size_t>(ix);
    }
};

} // namespace slexp
