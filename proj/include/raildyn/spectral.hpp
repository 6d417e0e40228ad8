#pragma once

#include "raildyn/types.hpp"

namespace raildyn {

/// Real generalized eigenbasis of (M, K): K Phi_i = omega_sq_i M Phi_i.
struct ModalBasis {
    Vec omega_sq; ///< ascending; tiny negatives from semi-definite K clamped to 0
    Mat Phi;      ///< mass-normalized columns: Phi^T M Phi = I

    int n() const { return static_cast<int>(omega_sq.size()); }
};

/// Requires M symmetric positive definite and K symmetric. Clamps eigenvalues
/// in [-1e-8*max, 0) to zero; anything more negative is an error.
ModalBasis modal_decompose(const Mat& M, const Mat& K);

/// First-order companion matrix D = [[0, I], [-diag(omega_sq), -Phi^T C Phi]]
/// for the modal-coordinate state y = [z; zdot], ydot = D y + [0; Phi^T F].
/// The sign convention makes damped trajectories decay.
Mat build_state_matrix(const ModalBasis& basis, const Mat& C);

/// Complex eigenstructure of the state matrix, plus the map from a physical
/// load vector to the decoupled modal forcing coefficients.
struct StateBasis {
    CVec lambda;   ///< ascending |lambda|; conjugate partner with Im < 0 first
    CMat Psi;      ///< eigenvector columns, same order as lambda
    CMat Psi_inv;  ///< verified inverse (residual below 1e-8)
    CMat force_map; ///< (2n x n): F_physical -> b = Psi_inv * [0; Phi^T F]
    Mat Phi;       ///< carried from the modal basis for reconstruction

    int n() const { return static_cast<int>(Phi.rows()); }
};

/// Decomposes build_state_matrix(basis, C). Fails with NumericalError when the
/// eigenvector matrix is defective (smallest singular value below 1e-10 of the
/// largest) or its inverse fails the residual check.
StateBasis state_decompose(const ModalBasis& basis, const Mat& C);

} // namespace raildyn
