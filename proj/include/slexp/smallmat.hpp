#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "slexp/errors.hpp"

namespace slexp {

using Complex = std::complex<double>;

// Dense complex matrix of dimension 1..3, value semantics.
struct CMat {
    int n = 0;
    std::array<Complex, 9> a{};

    CMat() = default;
    explicit CMat(int dim) : n(dim) {
        if (dim < 1 || dim > 3) throw InvalidInputError("CMat: dim must be 1..3");
    }

    Complex& at(int i, int j) { return a[static_cast<std::size_t>(i * n + j)]; }
    const Complex& at(int i, int j) const { return a[static_cast<std::size_t>(i * n + j)]; }

    static CMat identity(int dim) {
        CMat m(dim);
        for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
        return m;
    }
    static CMat zero(int dim) { return CMat(dim); }
};

inline CMat operator+(const CMat& x, const CMat& y) {
    CMat r(x.n);
    for (int i = 0; i < x.n * x.n; ++i) r.a[i] = x.a[i] + y.a[i];
    return r;
}

inline CMat operator-(const CMat& x, const CMat& y) {
    CMat r(x.n);
    for (int i = 0; i < x.n * x.n; ++i) r.a[i] = x.a[i] - y.a[i];
    return r;
}

inline CMat operator*(Complex s, const CMat& x) {
    CMat r(x.n);
    for (int i = 0; i < x.n * x.n; ++i) r.a[i] = s * x.a[i];
    return r;
}

inline CMat operator*(const CMat& x, const CMat& y) {
    CMat r(x.n);
    for (int i = 0; i < x.n; ++i)
        for (int j = 0; j < x.n; ++j) {
            Complex s = 0.0;
            for (int k = 0; k < x.n; ++k) s += x.at(i, k) * y.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

inline std::array<Complex, 3> matvec(const CMat& m, const std::array<Complex, 3>& v) {
    std::array<Complex, 3> r{};
    for (int i = 0; i < m.n; ++i) {
        Complex s = 0.0;
        for (int j = 0; j < m.n; ++j) s += m.at(i, j) * v[static_cast<std::size_t>(j)];
        r[static_cast<std::size_t>(i)] = s;
    }
    return r;
}

inline double frobenius_norm(const CMat& m) {
    double s = 0.0;
    for (int i = 0; i < m.n * m.n; ++i) s += std::norm(m.a[i]);
    return std::sqrt(s);
}

inline Complex det(const CMat& m) {
    if (m.n == 1) return m.a[0];
    if (m.n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
    return m.at(0, 0) * (m.at(1, 1) * m.at(2, 2) - m.at(1, 2) * m.at(2, 1))
         - m.at(0, 1) * (m.at(1, 0) * m.at(2, 2) - m.at(1, 2) * m.at(2, 0))
         + m.at(0, 2) * (m.at(1, 0) * m.at(2, 1) - m.at(1, 1) * m.at(2, 0));
}

// Closed-form inverse via the adjugate.
inline CMat inverse(const CMat& m) {
    Complex d = det(m);
    if (std::abs(d) == 0.0) throw DecompositionError("CMat: singular matrix");
    CMat r(m.n);
    if (m.n == 1) {
        r.a[0] = 1.0 / d;
        return r;
    }
    if (m.n == 2) {
        r.at(0, 0) = m.at(1, 1) / d;
        r.at(0, 1) = -m.at(0, 1) / d;
        r.at(1, 0) = -m.at(1, 0) / d;
        r.at(1, 1) = m.at(0, 0) / d;
        return r;
    }
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const int i1 = (i + 1) % 3, i2 = (i + 2) % 3;
            const int j1 = (j + 1) % 3, j2 = (j + 2) % 3;
            // cofactor transpose
            r.at(j, i) = (m.at(i1, j1) * m.at(i2, j2) - m.at(i1, j2) * m.at(i2, j1)) / d;
        }
    return r;
}

} // namespace slexp
