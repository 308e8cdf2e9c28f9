#pragma once

#include <array>
#include <complex>

#include "slexp/smallmat.hpp"

namespace slexp {

// phi_k(z): phi_0(z) = e^z, phi_k(z) = (phi_{k-1}(z) - phi_{k-1}(0)) / z.
// Below |z| = 1e-1 the removable singularity is handled by a 20-term Taylor
// series sum_{j>=0} z^j/(j+k)!; both branches agree to better than 1e-12
// around the switch. Supports k = 0..4.
Complex eval_phi(int k, Complex z);

// psi_k(z) = (-1)^{k+1} phi_k(-z) + sum_{l=1}^{k-1} phi_l(-z), k in {1, 2}.
Complex eval_psi(int k, Complex z);

// Threshold below which eval_phi switches to the series branch.
inline constexpr double phi_series_threshold = 1e-1;

// Small dense complex matrix together with its eigendecomposition
// entries = eig_vectors * diag(eig_values) * eig_vectors_inv.
// Immutable after construction; safe to share across threads.
class SymbolMatrix {
public:
    // Decompose a general dim<=3 matrix. Throws DecompositionError if the
    // reconstruction residual exceeds the tolerance (non-diagonalizable).
    static SymbolMatrix decompose(const CMat& entries);

    // Build from a known closed-form eigendecomposition (still validated).
    static SymbolMatrix from_parts(const CMat& entries, const std::array<Complex, 3>& values,
                                   const CMat& vectors);

    int dim() const { return entries_.n; }
    const CMat& entries() const { return entries_; }
    const std::array<Complex, 3>& eig_values() const { return values_; }
    const CMat& eig_vectors() const { return vectors_; }
    const CMat& eig_vectors_inv() const { return vectors_inv_; }

    // Residual tolerances for the construction invariants.
    static constexpr double residual_tol = 1e-12;

private:
    SymbolMatrix(const CMat& e, const std::array<Complex, 3>& v, const CMat& q, const CMat& qi)
        : entries_(e), values_(v), vectors_(q), vectors_inv_(qi) {}

    CMat entries_;
    std::array<Complex, 3> values_{};
    CMat vectors_;
    CMat vectors_inv_;
};

// phi_k(scale * M) = Q diag(phi_k(scale * lambda_i)) Q^{-1}.
CMat phi_of_matrix(int k, const SymbolMatrix& m, double scale);

// psi_k(scale * M), same diagonalization route.
CMat psi_of_matrix(int k, const SymbolMatrix& m, double scale);

} // namespace slexp
