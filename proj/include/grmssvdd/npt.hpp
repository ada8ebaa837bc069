#pragma once

#include "grmssvdd/common.hpp"

namespace grmssvdd {

/// Non-linear Projection Trick artifacts for one modality.
///
/// The centered RBF kernel is eigendecomposed and the training data is
/// replaced by the explicit embedding phi_train, whose Gram matrix
/// reproduces the centered kernel: phi^T phi = K_hat.
struct NptModel {
    double sigma = 1.0;
    Matrix train_inputs;     // D x N, inputs the kernel was built from
    Matrix centered_kernel;  // N x N
    Vector kernel_row_means; // N, row means of the raw training kernel
    Matrix eigenvectors;     // N x r, retained columns
    Vector eigenvalues;      // r, descending, all > retention threshold
    Matrix phi_train;        // r x N embedded training data
    Matrix phi_pinv;         // r x N, pseudo-inverse of phi_train^T

    int rank() const { return static_cast<int>(eigenvalues.size()); }
    int train_count() const { return static_cast<int>(train_inputs.cols()); }
};

/// Gaussian kernel between column sets: entry (i, j) =
/// exp(-||a_i - b_j||^2 / (2 sigma^2)).
Matrix rbf_kernel(const Matrix& A, const Matrix& B, double sigma);

/// Double-centering K_hat = (I - J/N) K (I - J/N).
Matrix center_kernel(const Matrix& K);

/// Builds the NPT embedding of a training matrix (columns are instances).
/// Eigenvalues at or below 1e-10 times the largest one are dropped; if none
/// survive the kernel is degenerate.
NptModel fit_npt(const Matrix& X, double sigma);

/// Embeds a batch of test columns:
/// phi_star = (phi^T)^+ (I - J/N) (K_star - K 1_N / N).
Matrix map_test(const NptModel& model, const Matrix& X_star);

}  // namespace grmssvdd
