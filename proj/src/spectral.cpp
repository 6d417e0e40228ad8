#include "raildyn/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <numeric>
#include <sstream>
#include <vector>

namespace raildyn {
namespace {

void require_symmetric(const Mat& A, const char* name) {
    const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
    const double skew = (A - A.transpose()).cwiseAbs().maxCoeff();
    if (skew > 1e-10 * scale) {
        std::ostringstream os;
        os << "matrix " << name << " is not symmetric: max |A - A^T| = " << skew
           << " against scale " << scale;
        throw NumericalError(os.str());
    }
}

} // namespace

ModalBasis modal_decompose(const Mat& M, const Mat& K) {
    if (M.rows() != M.cols() || K.rows() != K.cols() || M.rows() != K.rows())
        throw NumericalError("modal_decompose: dimension mismatch");
    require_symmetric(M, "M");
    require_symmetric(K, "K");

    Eigen::LLT<Mat> llt(M);
    if (llt.info() != Eigen::Success) {
        std::ostringstream os;
        os << "modal_decompose: mass matrix is not positive definite"
           << " (Cholesky failed; min diagonal " << M.diagonal().minCoeff() << ")";
        throw NumericalError(os.str());
    }

    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> solver(K, M);
    if (solver.info() != Eigen::Success)
        throw NumericalError("modal_decompose: generalized eigensolver did not converge");

    ModalBasis basis;
    basis.omega_sq = solver.eigenvalues();
    basis.Phi = solver.eigenvectors();

    const double lam_max = basis.omega_sq.cwiseAbs().maxCoeff();
    for (int i = 0; i < basis.omega_sq.size(); ++i) {
        if (basis.omega_sq[i] < 0.0) {
            if (basis.omega_sq[i] < -1e-8 * std::max(lam_max, 1.0)) {
                std::ostringstream os;
                os << "modal_decompose: eigenvalue " << i << " is " << basis.omega_sq[i]
                   << ", beyond the semi-definite clamp band";
                throw NumericalError(os.str());
            }
            basis.omega_sq[i] = 0.0;
        }
    }
    return basis;
}

Mat build_state_matrix(const ModalBasis& basis, const Mat& C) {
    const int n = basis.n();
    if (C.rows() != n || C.cols() != n)
        throw NumericalError("build_state_matrix: damping matrix dimension mismatch");
    const Mat G = basis.Phi.transpose() * C * basis.Phi;

    Mat D = Mat::Zero(2 * n, 2 * n);
    D.topRightCorner(n, n) = Mat::Identity(n, n);
    D.bottomLeftCorner(n, n) = (-basis.omega_sq).asDiagonal();
    D.bottomRightCorner(n, n) = -G;
    return D;
}

StateBasis state_decompose(const ModalBasis& basis, const Mat& C) {
    const int n = basis.n();
    const Mat D = build_state_matrix(basis, C);

    Eigen::EigenSolver<Mat> solver(D);
    if (solver.info() != Eigen::Success)
        throw NumericalError("state_decompose: eigensolver did not converge");

    const CVec lambda_raw = solver.eigenvalues();
    const CMat Psi_raw = solver.eigenvectors();

    // Deterministic ordering: ascending |lambda|, conjugate twin with
    // negative imaginary part first.
    std::vector<int> order(2 * n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const double ma = std::abs(lambda_raw[a]);
        const double mb = std::abs(lambda_raw[b]);
        if (ma != mb) return ma < mb;
        return lambda_raw[a].imag() < lambda_raw[b].imag();
    });

    StateBasis sb;
    sb.lambda.resize(2 * n);
    sb.Psi.resize(2 * n, 2 * n);
    for (int i = 0; i < 2 * n; ++i) {
        sb.lambda[i] = lambda_raw[order[i]];
        sb.Psi.col(i) = Psi_raw.col(order[i]);
    }

    Eigen::BDCSVD<CMat> svd(sb.Psi);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(svd.singularValues().size() - 1);
    if (smin < 1e-10 * smax) {
        std::ostringstream os;
        os << "state_decompose: eigenvector matrix is defective"
           << " (singular values " << smin << " .. " << smax << ")";
        throw NumericalError(os.str());
    }

    sb.Psi_inv = Eigen::PartialPivLU<CMat>(sb.Psi).inverse();
    const double residual =
        (sb.Psi * sb.Psi_inv - CMat::Identity(2 * n, 2 * n)).cwiseAbs().maxCoeff();
    if (residual > 1e-8) {
        std::ostringstream os;
        os << "state_decompose: inverse residual " << residual << " exceeds 1e-8";
        throw NumericalError(os.str());
    }

    // Forcing enters the first-order system as [0; Phi^T F]; in decoupled
    // coordinates that is the right half of Psi_inv applied to Phi^T F.
    sb.force_map = sb.Psi_inv.rightCols(n) * basis.Phi.transpose();
    sb.Phi = basis.Phi;
    return sb;
}

} // namespace raildyn
