#include "slexp/exp_core.hpp"

#include <algorithm>
#include <cmath>

#include "slexp/errors.hpp"

namespace slexp {

namespace {

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

double factorial(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// sum_{j=0}^{19} z^j / (j+k)!, truncation below 1e-16 relative for |z| < 0.1
Complex phi_series(int k, Complex z) {
    Complex term = 1.0 / factorial(k);
    Complex sum = term;
    for (int j = 1; j < 20; ++j) {
        term *= z / static_cast<double>(j + k);
        sum += term;
    }
    return sum;
}

} // namespace

Complex eval_phi(int k, Complex z) {
    if (k < 0 || k > 4) throw InvalidInputError("eval_phi: k must be in 0..4");
    if (!finite(z)) throw InvalidInputError("eval_phi: non-finite argument");
    if (k == 0) return std::exp(z);
    // The upward recurrence loses one factor 1/|z| of absolute accuracy per
    // level; k = 3, 4 need a wider series region to stay at 1e-13 relative.
    static constexpr double thresholds[5] = {0.0, phi_series_threshold, phi_series_threshold, 0.25, 0.5};
    if (std::abs(z) < thresholds[k]) return phi_series(k, z);
    Complex phi = std::exp(z);
    for (int j = 1; j <= k; ++j) phi = (phi - 1.0 / factorial(j - 1)) / z;
    return phi;
}

Complex eval_psi(int k, Complex z) {
    if (k < 1 || k > 2) throw InvalidInputError("eval_psi: k must be 1 or 2");
    if (!finite(z)) throw InvalidInputError("eval_psi: non-finite argument");
    const double sign = (k % 2 == 1) ? 1.0 : -1.0; // (-1)^{k+1}
    Complex psi = sign * eval_phi(k, -z);
    for (int l = 1; l <= k - 1; ++l) psi += eval_phi(l, -z);
    return psi;
}

namespace {

// Roots of z^2 + bz + c (complex, numerically stable pairing).
std::array<Complex, 2> quadratic_roots(Complex b, Complex c) {
    Complex disc = std::sqrt(b * b - 4.0 * c);
    // pick the sign that avoids cancellation in -b -/+ disc
    Complex q = (std::real(std::conj(b) * disc) >= 0.0) ? -0.5 * (b + disc) : -0.5 * (b - disc);
    if (std::abs(q) == 0.0) return {Complex(0.0), Complex(0.0)};
    return {q, c / q};
}

// Roots of z^3 + a2 z^2 + a1 z + a0, Cardano followed by Newton polishing.
std::array<Complex, 3> cubic_roots(Complex a2, Complex a1, Complex a0) {
    const Complex shift = a2 / 3.0;
    const Complex p = a1 - a2 * a2 / 3.0;
    const Complex q = 2.0 * a2 * a2 * a2 / 27.0 - a2 * a1 / 3.0 + a0;
    std::array<Complex, 3> roots;
    if (std::abs(p) == 0.0 && std::abs(q) == 0.0) {
        roots = {-shift, -shift, -shift};
        return roots;
    }
    Complex inner = std::sqrt(q * q / 4.0 + p * p * p / 27.0);
    Complex u3 = -q / 2.0 + inner;
    if (std::abs(u3) < 1e-30) u3 = -q / 2.0 - inner;
    Complex u = std::pow(u3, 1.0 / 3.0);
    const Complex omega(-0.5, std::sqrt(3.0) / 2.0);
    for (int i = 0; i < 3; ++i) {
        Complex ui = u;
        for (int j = 0; j < i; ++j) ui *= omega;
        Complex t = (std::abs(ui) == 0.0) ? Complex(0.0) : ui - p / (3.0 * ui);
        Complex z = t - shift;
        // Newton polish on the monic cubic
        for (int it = 0; it < 3; ++it) {
            Complex f = ((z + a2) * z + a1) * z + a0;
            Complex df = (3.0 * z + 2.0 * a2) * z + a1;
            if (std::abs(df) == 0.0) break;
            z -= f / df;
        }
        roots[static_cast<std::size_t>(i)] = z;
    }
    return roots;
}

double vec_norm(const std::array<Complex, 3>& v) {
    return std::sqrt(std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]));
}

// Null vector of a (numerically) rank-deficient dim<=3 matrix. For repeated
// eigenvalues with a 2D null space, `avoid` selects the complement direction
// orthogonal to an already-chosen eigenvector.
std::array<Complex, 3> null_vector(const CMat& m, const std::array<Complex, 3>* avoid = nullptr) {
    const int n = m.n;
    if (n == 1) return {Complex(1.0), Complex(0.0), Complex(0.0)};
    if (n == 2) {
        const Complex a = m.at(0, 0), b = m.at(0, 1), c = m.at(1, 0), d = m.at(1, 1);
        const double r0 = std::abs(a) + std::abs(b), r1 = std::abs(c) + std::abs(d);
        std::array<Complex, 3> v{};
        if (r0 >= r1) { v[0] = -b; v[1] = a; }
        else          { v[0] = -d; v[1] = c; }
        double nn = vec_norm(v);
        if (nn == 0.0) {
            // zero matrix: 2D null space, honor `avoid`
            v = {Complex(1.0), Complex(0.0), Complex(0.0)};
            if (avoid && std::abs((*avoid)[0]) > std::abs((*avoid)[1])) v = {Complex(0.0), Complex(1.0), Complex(0.0)};
            return v;
        }
        v[0] /= nn;
        v[1] /= nn;
        return v;
    }
    // 3x3: the cross product of two independent rows spans the null space of a
    // rank-2 matrix. Judge independence by the relative sine, so rows of very
    // different magnitudes are handled.
    std::array<std::array<Complex, 3>, 3> rows;
    std::array<double, 3> row_norm;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j)
            rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m.at(i, j);
        row_norm[static_cast<std::size_t>(i)] = vec_norm(rows[static_cast<std::size_t>(i)]);
    }
    // plain bilinear cross product: rows annihilate it without conjugation
    auto cross = [](const std::array<Complex, 3>& u, const std::array<Complex, 3>& v) {
        return std::array<Complex, 3>{u[1] * v[2] - u[2] * v[1], u[2] * v[0] - u[0] * v[2],
                                      u[0] * v[1] - u[1] * v[0]};
    };
    std::array<Complex, 3> best{};
    double best_rel = 0.0, best_norm = 0.0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j) {
            const double denom = row_norm[static_cast<std::size_t>(i)] * row_norm[static_cast<std::size_t>(j)];
            if (denom == 0.0) continue;
            auto c = cross(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
            const double nn = vec_norm(c);
            if (nn / denom > best_rel) {
                best_rel = nn / denom;
                best_norm = nn;
                best = c;
            }
        }
    if (best_rel > 1e-8) {
        for (auto& c : best) c /= best_norm;
        return best;
    }
    // rank <= 1: two-dimensional null space { v : r . v = 0 } of the largest row
    int ir = 0;
    for (int i = 1; i < 3; ++i)
        if (row_norm[static_cast<std::size_t>(i)] > row_norm[static_cast<std::size_t>(ir)]) ir = i;
    const double rn = row_norm[static_cast<std::size_t>(ir)];
    if (rn == 0.0) {
        std::array<Complex, 3> v{Complex(1.0), Complex(0.0), Complex(0.0)};
        if (avoid && std::abs((*avoid)[0]) >= std::abs((*avoid)[1])) v = {Complex(0.0), Complex(1.0), Complex(0.0)};
        return v;
    }
    const auto& r = rows[static_cast<std::size_t>(ir)];
    // r x e_k are plainly orthogonal to r and span its null plane
    std::array<std::array<Complex, 3>, 3> cand{
        std::array<Complex, 3>{Complex(0.0), r[2], -r[1]},
        std::array<Complex, 3>{-r[2], Complex(0.0), r[0]},
        std::array<Complex, 3>{r[1], -r[0], Complex(0.0)}};
    std::array<std::array<Complex, 3>, 2> basis;
    int found = 0;
    for (int e = 0; e < 3 && found < 2; ++e) {
        auto v = cand[static_cast<std::size_t>(e)];
        // Hermitian orthogonalization keeps conditioning; the null-space
        // constraint is linear, so combinations remain inside it
        for (int b = 0; b < found; ++b) {
            const auto& w = basis[static_cast<std::size_t>(b)];
            Complex p = std::conj(w[0]) * v[0] + std::conj(w[1]) * v[1] + std::conj(w[2]) * v[2];
            for (int i = 0; i < 3; ++i) v[static_cast<std::size_t>(i)] -= p * w[static_cast<std::size_t>(i)];
        }
        const double nn = vec_norm(v);
        if (nn > 1e-8 * rn) {
            for (auto& c : v) c /= nn;
            basis[static_cast<std::size_t>(found++)] = v;
        }
    }
    if (found == 0) return {Complex(1.0), Complex(0.0), Complex(0.0)};
    if (found == 1 || !avoid) return basis[0];
    const auto& a = *avoid;
    auto herm = [&](const std::array<Complex, 3>& w) {
        return std::abs(std::conj(a[0]) * w[0] + std::conj(a[1]) * w[1] + std::conj(a[2]) * w[2]);
    };
    return (herm(basis[0]) <= herm(basis[1])) ? basis[0] : basis[1];
}

bool near_scalar_multiple_of_identity(const CMat& m, Complex* lambda) {
    Complex mean = 0.0;
    for (int i = 0; i < m.n; ++i) mean += m.at(i, i);
    mean /= static_cast<double>(m.n);
    double off = 0.0, scale = std::abs(mean);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) {
            Complex e = m.at(i, j) - (i == j ? mean : Complex(0.0));
            off = std::max(off, std::abs(e));
            scale = std::max(scale, std::abs(m.at(i, j)));
        }
    if (off <= 1e-14 * std::max(scale, 1e-300) || scale == 0.0) {
        *lambda = mean;
        return true;
    }
    return false;
}

} // namespace

SymbolMatrix SymbolMatrix::decompose(const CMat& entries) {
    const int n = entries.n;
    if (n < 1 || n > 3) throw InvalidInputError("SymbolMatrix: dim must be 1..3");
    for (int i = 0; i < n * n; ++i)
        if (!finite(entries.a[static_cast<std::size_t>(i)]))
            throw InvalidInputError("SymbolMatrix: non-finite entries");

    Complex lam;
    if (near_scalar_multiple_of_identity(entries, &lam)) {
        std::array<Complex, 3> values{};
        for (int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = lam;
        return from_parts(entries, values, CMat::identity(n));
    }

    std::array<Complex, 3> values{};
    if (n == 1) {
        values[0] = entries.a[0];
        return from_parts(entries, values, CMat::identity(1));
    }
    if (n == 2) {
        Complex tr = entries.at(0, 0) + entries.at(1, 1);
        auto r = quadratic_roots(-tr, det(entries));
        values[0] = r[0];
        values[1] = r[1];
    } else {
        Complex tr = entries.at(0, 0) + entries.at(1, 1) + entries.at(2, 2);
        // sum of principal 2x2 minors
        Complex m2 = entries.at(0, 0) * entries.at(1, 1) - entries.at(0, 1) * entries.at(1, 0)
                   + entries.at(0, 0) * entries.at(2, 2) - entries.at(0, 2) * entries.at(2, 0)
                   + entries.at(1, 1) * entries.at(2, 2) - entries.at(1, 2) * entries.at(2, 1);
        auto r = cubic_roots(-tr, m2, -det(entries));
        values = r;
    }

    CMat q(n);
    double eig_scale = 0.0;
    for (int i = 0; i < n; ++i) eig_scale = std::max(eig_scale, std::abs(values[static_cast<std::size_t>(i)]));
    std::array<Complex, 3> prev{};
    for (int i = 0; i < n; ++i) {
        CMat shifted = entries;
        for (int d = 0; d < n; ++d) shifted.at(d, d) -= values[static_cast<std::size_t>(i)];
        bool repeated = false;
        for (int j = 0; j < i; ++j)
            if (std::abs(values[static_cast<std::size_t>(i)] - values[static_cast<std::size_t>(j)]) <
                1e-9 * std::max(eig_scale, 1.0)) {
                for (int rix = 0; rix < n; ++rix) prev[static_cast<std::size_t>(rix)] = q.at(rix, j);
                repeated = true;
            }
        auto v = null_vector(shifted, repeated ? &prev : nullptr);
        for (int rix = 0; rix < n; ++rix) q.at(rix, i) = v[static_cast<std::size_t>(rix)];
    }

    return from_parts(entries, values, q); // validates residuals
}

SymbolMatrix SymbolMatrix::from_parts(const CMat& entries, const std::array<Complex, 3>& values,
                                      const CMat& vectors) {
    const int n = entries.n;
    CMat qi = inverse(vectors);

    CMat lam(n);
    for (int i = 0; i < n; ++i) lam.at(i, i) = values[static_cast<std::size_t>(i)];
    CMat rec = vectors * lam * qi;
    const double scale = std::max(frobenius_norm(entries), 1e-300);
    if (frobenius_norm(rec - entries) > residual_tol * scale)
        throw DecompositionError("SymbolMatrix: reconstruction residual above tolerance");
    CMat qq = vectors * qi;
    if (frobenius_norm(qq - CMat::identity(n)) > residual_tol * n)
        throw DecompositionError("SymbolMatrix: eig_vectors * eig_vectors_inv far from identity");
    return SymbolMatrix(entries, values, vectors, qi);
}

namespace {

CMat function_of_matrix(Complex (*f)(int, Complex), int k, const SymbolMatrix& m, double scale) {
    if (!std::isfinite(scale)) throw InvalidInputError("matrix function: non-finite scale");
    const int n = m.dim();
    CMat diag(n);
    for (int i = 0; i < n; ++i)
        diag.at(i, i) = f(k, scale * m.eig_values()[static_cast<std::size_t>(i)]);
    return m.eig_vectors() * diag * m.eig_vectors_inv();
}

} // namespace

CMat phi_of_matrix(int k, const SymbolMatrix& m, double scale) {
    return function_of_matrix(&eval_phi, k, m, scale);
}

CMat psi_of_matrix(int k, const SymbolMatrix& m, double scale) {
    return function_of_matrix(&eval_psi, k, m, scale);
}

} // namespace slexp
