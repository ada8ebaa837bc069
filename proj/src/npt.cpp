#include "grmssvdd/npt.hpp"

#include <cmath>

namespace grmssvdd {

namespace {
constexpr double kEigenToleranceFactor = 1e-10;
}

Matrix rbf_kernel(const Matrix& A, const Matrix& B, double sigma) {
    if (!(sigma > 0.0)) throw InvalidInput("rbf_kernel: sigma must be > 0");
    if (A.rows() != B.rows()) throw ShapeMismatch("rbf_kernel: row dimensions differ");

    const Vector a_sq = A.colwise().squaredNorm();
    const Vector b_sq = B.colwise().squaredNorm();
    Matrix K = -2.0 * (A.transpose() * B);
    K.colwise() += a_sq;
    K.rowwise() += b_sq.transpose();
    // Squared distances can dip below zero by rounding.
    K = (K.cwiseMax(0.0) / (-2.0 * sigma * sigma)).array().exp();
    return K;
}

Matrix center_kernel(const Matrix& K) {
    if (K.rows() != K.cols()) throw ShapeMismatch("center_kernel: matrix must be square");
    const Vector row_means = K.rowwise().mean();
    const Vector col_means = K.colwise().mean();
    const double grand_mean = K.mean();

    Matrix centered = K;
    centered.colwise() -= row_means;
    centered.rowwise() -= col_means.transpose();
    centered.array() += grand_mean;
    return centered;
}

NptModel fit_npt(const Matrix& X, double sigma) {
    const auto N = X.cols();
    if (N < 2) throw InvalidInput("fit_npt: need at least 2 training columns");

    NptModel model;
    model.sigma = sigma;
    model.train_inputs = X;
    const Matrix K = rbf_kernel(X, X, sigma);
    model.kernel_row_means = K.rowwise().mean();
    model.centered_kernel = center_kernel(K);

    Eigen::SelfAdjointEigenSolver<Matrix> eigen(model.centered_kernel);
    if (eigen.info() != Eigen::Success) throw DegenerateKernel("fit_npt: eigensolver failed");

    const double max_eigenvalue = eigen.eigenvalues().maxCoeff();
    const double threshold = kEigenToleranceFactor * std::max(0.0, max_eigenvalue);
    int rank = 0;
    for (int i = 0; i < N; ++i) {
        if (eigen.eigenvalues()[i] > threshold) ++rank;
    }
    if (rank == 0) throw DegenerateKernel("fit_npt: no eigenvalue above tolerance");

    // Descending order; the kernel is PSD in exact arithmetic, so retained
    // values are clamped nonnegative before the square root.
    model.eigenvectors = Matrix(N, rank);
    model.eigenvalues = Vector(rank);
    for (int r = 0; r < rank; ++r) {
        const int src = static_cast<int>(N) - 1 - r;
        model.eigenvalues[r] = std::max(0.0, eigen.eigenvalues()[src]);
        model.eigenvectors.col(r) = eigen.eigenvectors().col(src);
    }

    // With orthonormal U the embedding reduces to A^(1/2) U^T on the retained
    // subspace, and the pseudo-inverse of phi^T to A^(-1/2) U^T.
    const Vector sqrt_values = model.eigenvalues.cwiseSqrt();
    model.phi_train = sqrt_values.asDiagonal() * model.eigenvectors.transpose();
    model.phi_pinv = sqrt_values.cwiseInverse().asDiagonal() * model.eigenvectors.transpose();
    return model;
}

Matrix map_test(const NptModel& model, const Matrix& X_star) {
    if (X_star.rows() != model.train_inputs.rows())
        throw ShapeMismatch("map_test: test row dimension != training dimension");

    Matrix K_star = rbf_kernel(model.train_inputs, X_star, model.sigma);
    if (K_star.cols() == 0) return Matrix(model.rank(), 0);

    K_star.colwise() -= model.kernel_row_means;
    // Left-multiply by the centering projector (I - J/N).
    const Eigen::RowVectorXd col_means = K_star.colwise().mean();
    K_star.rowwise() -= col_means;
    return model.phi_pinv * K_star;
}

}  // namespace grmssvdd
