#include "grmssvdd/regularizers.hpp"

namespace grmssvdd {

namespace {

constexpr double kOutlierSlack = 1e-12;

void check_shapes(const std::vector<Matrix>& Q, const std::vector<Matrix>& X,
                  const Matrix& alpha) {
    const auto M = Q.size();
    if (X.size() != M) throw ShapeMismatch("regularizer: Q and X modality counts differ");
    if (M == 0) throw ShapeMismatch("regularizer: no modalities");
    if (alpha.rows() != static_cast<Eigen::Index>(M))
        throw ShapeMismatch("regularizer: alpha must have one row per modality");
    const Eigen::Index d = Q[0].rows();
    for (std::size_t m = 0; m < M; ++m) {
        if (Q[m].rows() != d) throw ShapeMismatch("regularizer: inconsistent subspace dim");
        if (Q[m].cols() != X[m].rows())
            throw ShapeMismatch("regularizer: Q_m columns must match X_m rows");
        if (X[m].cols() != alpha.cols())
            throw ShapeMismatch("regularizer: X_m columns must match alpha columns");
    }
}

}  // namespace

void RegularizerSpec::validate() const {
    if (id < 0 || id > 9) throw InvalidInput("regularizer id must be in 0..9");
    if (beta < 0.0) throw InvalidInput("regularizer beta must be >= 0");
    if (k < 0) throw InvalidInput("regularizer k must be >= 0");
}

GraphKind graph_kind_for(int id) {
    switch (id) {
        case 7: return GraphKind::KNN;
        case 8: return GraphKind::WithinCluster;
        case 9: return GraphKind::BetweenCluster;
    }
    throw InvalidInput("graph_kind_for: only ids 7-9 use a graph");
}

Vector build_nu(int id, const Vector& alpha_m, double C) {
    switch (id) {
        case 0:
            return Vector::Zero(alpha_m.size());
        case 1:
        case 4:
            return Vector::Ones(alpha_m.size());
        case 2:
        case 5:
            return alpha_m;
        case 3:
        case 6: {
            Vector lambda = alpha_m;
            for (Eigen::Index i = 0; i < lambda.size(); ++i) {
                if (lambda[i] >= C - kOutlierSlack) lambda[i] = 0.0;
            }
            return lambda;
        }
        case 7:
        case 8:
        case 9:
            throw WrongPath("build_nu: ids 7-9 take the graph path");
    }
    throw InvalidInput("build_nu: id must be in 0..9");
}

double omega_value(const RegularizerSpec& spec, const std::vector<Matrix>& Q,
                   const std::vector<Matrix>& X, const Matrix& alpha, double C,
                   const std::vector<GraphLaplacian>& laplacians) {
    spec.validate();
    check_shapes(Q, X, alpha);
    const auto M = Q.size();

    if (spec.id <= 3) {
        double total = 0.0;
        for (std::size_t m = 0; m < M; ++m) {
            const Vector nu = build_nu(spec.id, alpha.row(static_cast<Eigen::Index>(m)), C);
            total += (Q[m] * (X[m] * nu)).squaredNorm();
        }
        return total;
    }
    if (spec.id <= 6) {
        Vector sum = Vector::Zero(Q[0].rows());
        for (std::size_t m = 0; m < M; ++m) {
            const Vector nu = build_nu(spec.id, alpha.row(static_cast<Eigen::Index>(m)), C);
            sum += Q[m] * (X[m] * nu);
        }
        return sum.squaredNorm();
    }

    if (laplacians.size() != M)
        throw ShapeMismatch("regularizer: one Laplacian per modality required");
    double total = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
        const Matrix& L = laplacians[m].matrix;
        if (L.rows() != X[m].cols() || L.cols() != X[m].cols())
            throw ShapeMismatch("regularizer: Laplacian must be N x N");
        const Matrix QX = Q[m] * X[m];
        total += (QX * L * QX.transpose()).trace();
    }
    return total;
}

Matrix omega_gradient(const RegularizerSpec& spec, int m, const std::vector<Matrix>& Q,
                      const std::vector<Matrix>& X, const Matrix& alpha, double C,
                      const std::vector<GraphLaplacian>& laplacians) {
    spec.validate();
    check_shapes(Q, X, alpha);
    const auto M = Q.size();
    if (m < 0 || static_cast<std::size_t>(m) >= M)
        throw InvalidInput("omega_gradient: modality index out of range");

    if (spec.id <= 3) {
        const Vector nu = build_nu(spec.id, alpha.row(m), C);
        const Vector Xnu = X[static_cast<std::size_t>(m)] * nu;
        return 2.0 * (Q[static_cast<std::size_t>(m)] * Xnu) * Xnu.transpose();
    }
    if (spec.id <= 6) {
        Vector sum = Vector::Zero(Q[0].rows());
        for (std::size_t n = 0; n < M; ++n) {
            const Vector nu = build_nu(spec.id, alpha.row(static_cast<Eigen::Index>(n)), C);
            sum += Q[n] * (X[n] * nu);
        }
        const Vector Xnu_m =
            X[static_cast<std::size_t>(m)] * build_nu(spec.id, alpha.row(m), C);
        return 2.0 * sum * Xnu_m.transpose();
    }

    if (laplacians.size() != M)
        throw ShapeMismatch("regularizer: one Laplacian per modality required");
    const Matrix& L = laplacians[static_cast<std::size_t>(m)].matrix;
    const Matrix& Xm = X[static_cast<std::size_t>(m)];
    if (L.rows() != Xm.cols() || L.cols() != Xm.cols())
        throw ShapeMismatch("regularizer: Laplacian must be N x N");
    return 2.0 * Q[static_cast<std::size_t>(m)] * Xm * L * Xm.transpose();
}

}  // namespace grmssvdd
