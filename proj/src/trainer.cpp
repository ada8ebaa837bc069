#include "grmssvdd/trainer.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/QR>

#include "grmssvdd/regularizers.hpp"

namespace grmssvdd {

namespace {

constexpr double kConvergenceTol = 1e-8;

// Orthonormalizes the rows of Q via reduced QR of Q^T, with the R diagonal
// made positive so the factorization is unique.
Matrix orthonormalize_rows(const Matrix& Q) {
    const Eigen::Index d = Q.rows();
    Eigen::HouseholderQR<Matrix> qr(Q.transpose());
    Matrix thin = qr.householderQ() * Matrix::Identity(Q.cols(), d);
    const Matrix R = qr.matrixQR().topLeftCorner(d, d);
    for (Eigen::Index j = 0; j < d; ++j) {
        if (R(j, j) < 0.0) thin.col(j) = -thin.col(j);
    }
    return thin.transpose();
}

Matrix concatenate_projections(const std::vector<Matrix>& Y) {
    const Eigen::Index d = Y[0].rows();
    Eigen::Index total = 0;
    for (const auto& y : Y) total += y.cols();
    Matrix out(d, total);
    Eigen::Index at = 0;
    for (const auto& y : Y) {
        out.middleCols(at, y.cols()) = y;
        at += y.cols();
    }
    return out;
}

}  // namespace

void ModelConfig::validate(int modality_count) const {
    if (d < 1) throw InvalidInput("config: d must be >= 1");
    if (!(C > 0.0 && C <= 1.0)) throw InvalidInput("config: C must be in (0, 1]");
    if (!(eta > 0.0)) throw InvalidInput("config: eta must be > 0");
    if (beta < 0.0) throw InvalidInput("config: beta must be >= 0");
    if (use_npt && !(sigma > 0.0)) throw InvalidInput("config: sigma must be > 0 with NPT");
    if (regularizer < 0 || regularizer > 9)
        throw InvalidInput("config: regularizer id must be in 0..9");
    if (k < 0) throw InvalidInput("config: k must be >= 0");
    if (max_iter < 0) throw InvalidInput("config: max_iter must be >= 0");
    if (static_cast<int>(signs.size()) != modality_count)
        throw InvalidInput("config: one sign per modality required");
    for (int s : signs) {
        if (s != -1 && s != 1) throw InvalidInput("config: signs must be -1 or +1");
    }
}

TrainedModel train(const MultimodalDataset& dataset, const ModelConfig& config,
                   const IterationObserver& observer) {
    if (dataset.size() == 0) throw InvalidInput("train: empty dataset");
    for (const auto& inst : dataset.instances) {
        if (inst.label != 1)
            throw InvalidInput("train: only target-class (label 1) instances allowed");
    }
    config.validate(dataset.M);

    const int M = dataset.M;
    const int N = dataset.size();

    TrainedModel model;
    model.config = config;

    // Effective training matrices: NPT embeddings when enabled, else raw.
    std::vector<Matrix> X(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
        Matrix raw = modality_matrix(dataset, m);
        if (config.use_npt) {
            NptModel npt = fit_npt(raw, config.sigma);
            X[static_cast<std::size_t>(m)] = npt.phi_train;
            model.npt.push_back(std::move(npt));
        } else {
            X[static_cast<std::size_t>(m)] = std::move(raw);
        }
    }

    for (int m = 0; m < M; ++m) {
        if (config.d > X[static_cast<std::size_t>(m)].rows())
            throw InvalidInput("train: d exceeds the effective dimension of a modality");
    }

    RegularizerSpec reg{config.regularizer, config.beta, config.k};

    // Graph Laplacians depend only on the effective inputs, so they are
    // built once up front.
    std::vector<GraphLaplacian> laplacians;
    if (config.regularizer >= 7) {
        const GraphKind kind = graph_kind_for(config.regularizer);
        for (int m = 0; m < M; ++m) {
            laplacians.push_back(laplacian_for_training(
                kind, X[static_cast<std::size_t>(m)], config.k,
                config.seed + static_cast<std::uint64_t>(m)));
        }
    }

    std::vector<Matrix> Q(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m)
        Q[static_cast<std::size_t>(m)] =
            fit_pca_matrix(X[static_cast<std::size_t>(m)], config.d).components;

    auto project_all = [&](const std::vector<Matrix>& q) {
        std::vector<Matrix> Y(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m)
            Y[static_cast<std::size_t>(m)] =
                q[static_cast<std::size_t>(m)] * X[static_cast<std::size_t>(m)];
        return Y;
    };

    auto alpha_matrix = [&](const Vector& alpha_flat) {
        Matrix a(M, N);
        for (int m = 0; m < M; ++m)
            for (int i = 0; i < N; ++i)
                a(m, i) = alpha_flat[static_cast<Eigen::Index>(m) * N + i];
        return a;
    };

    double omega = 0.0;
    int iterations = 0;
    for (int iter = 0; iter < config.max_iter; ++iter) {
        const Matrix Ycat = concatenate_projections(project_all(Q));
        const SvddSolution sol = solve_svdd(Ycat, config.C);
        const Matrix alpha = alpha_matrix(sol.alpha);
        omega = omega_value(reg, Q, X, alpha, config.C, laplacians);

        // All gradients are taken at the current Q before any modality moves,
        // so each sign steers exactly one modality.
        std::vector<Matrix> weighted(static_cast<std::size_t>(M));
        Vector cross_sum = Vector::Zero(config.d);
        std::vector<Vector> x_alpha(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m) {
            x_alpha[static_cast<std::size_t>(m)] =
                X[static_cast<std::size_t>(m)] * alpha.row(m).transpose();
            cross_sum += Q[static_cast<std::size_t>(m)] * x_alpha[static_cast<std::size_t>(m)];
        }

        std::vector<Matrix> stepped(static_cast<std::size_t>(M));
        for (int m = 0; m < M; ++m) {
            const auto mu = static_cast<std::size_t>(m);
            const Matrix& Xm = X[mu];
            Matrix grad = 2.0 * Q[mu] * Xm * alpha.row(m).asDiagonal() * Xm.transpose();
            grad.noalias() -= 2.0 * cross_sum * x_alpha[mu].transpose();
            if (config.beta > 0.0)
                grad += config.beta *
                        omega_gradient(reg, m, Q, X, alpha, config.C, laplacians);
            stepped[mu] = Q[mu] + config.signs[mu] * config.eta * grad;
        }

        std::vector<Matrix> next(static_cast<std::size_t>(M));
        double max_delta = 0.0;
        for (int m = 0; m < M; ++m) {
            const auto mu = static_cast<std::size_t>(m);
            next[mu] = orthonormalize_rows(stepped[mu]);
            max_delta = std::max(max_delta,
                                 (next[mu] - Q[mu]).cwiseAbs().maxCoeff());
        }

        if (observer) {
            TrainingState state;
            state.iteration = iter;
            state.q_before = Q;
            state.q_stepped = std::move(stepped);
            state.q_after = next;
            state.svdd = sol;
            state.omega = omega;
            observer(state);
        }

        Q = std::move(next);
        ++iterations;
        if (max_delta < kConvergenceTol) break;
    }

    // Final solve so the stored dual matches the stored projections.
    const Matrix Ycat = concatenate_projections(project_all(Q));
    model.svdd = solve_svdd(Ycat, config.C);
    model.final_omega =
        omega_value(reg, Q, X, alpha_matrix(model.svdd.alpha), config.C, laplacians);
    model.q = std::move(Q);
    model.iterations_run = iterations;
    return model;
}

std::vector<Vector> project_features(const TrainedModel& model,
                                     const std::vector<Vector>& features) {
    const int M = model.modality_count();
    if (static_cast<int>(features.size()) != M)
        throw ShapeMismatch("project_features: one vector per modality required");

    std::vector<Vector> out(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
        const auto mu = static_cast<std::size_t>(m);
        Vector v = features[mu];
        if (model.config.use_npt) {
            if (static_cast<int>(model.npt.size()) != M)
                throw InvalidInput("project_features: NPT artifacts missing");
            v = map_test(model.npt[mu], v);
        }
        if (model.q[mu].cols() != v.size())
            throw ShapeMismatch("project_features: vector length does not match Q");
        out[mu] = model.q[mu] * v;
    }
    return out;
}

std::vector<Vector> project_window(const TrainedModel& model,
                                   const std::vector<Vector>& window) {
    const int M = model.modality_count();
    if (static_cast<int>(window.size()) != M)
        throw ShapeMismatch("project_window: one vector per modality required");
    if (static_cast<int>(model.pca.size()) != M ||
        static_cast<int>(model.normalization.size()) != M)
        throw InvalidInput("project_window: preprocessing artifacts not attached");

    std::vector<Vector> features(static_cast<std::size_t>(M));
    for (int m = 0; m < M; ++m) {
        const auto mu = static_cast<std::size_t>(m);
        Vector v = apply_pca(model.pca[mu], window[mu]);
        features[mu] = apply_normalization(model.normalization[mu], v);
    }
    return project_features(model, features);
}

}  // namespace grmssvdd
