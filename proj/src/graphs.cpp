#include "grmssvdd/graphs.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "grmssvdd/rng.hpp"

namespace grmssvdd {

std::string to_string(GraphKind kind) {
    switch (kind) {
        case GraphKind::KNN: return "knn";
        case GraphKind::WithinCluster: return "within_cluster";
        case GraphKind::BetweenCluster: return "between_cluster";
    }
    return "unknown";
}

namespace {

Matrix squared_distances(const Matrix& X) {
    const Vector sq = X.colwise().squaredNorm();
    Matrix D = -2.0 * (X.transpose() * X);
    D.colwise() += sq;
    D.rowwise() += sq.transpose();
    return D.cwiseMax(0.0);
}

std::vector<int> cluster_sizes(const std::vector<int>& assignment) {
    int k = 0;
    for (int c : assignment) k = std::max(k, c + 1);
    std::vector<int> sizes(k, 0);
    for (int c : assignment) {
        if (c < 0) throw InvalidInput("cluster assignment contains a negative label");
        ++sizes[c];
    }
    return sizes;
}

}  // namespace

GraphLaplacian knn_laplacian(const Matrix& X, int k) {
    const int N = static_cast<int>(X.cols());
    if (k < 1 || k >= N) throw InvalidInput("knn_laplacian: require 1 <= k <= N-1");

    const Matrix dist = squared_distances(X);
    Matrix adjacency = Matrix::Zero(N, N);
    std::vector<int> order(N);
    for (int i = 0; i < N; ++i) {
        std::iota(order.begin(), order.end(), 0);
        // Lower index wins on equal distance.
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return dist(i, a) < dist(i, b);
        });
        int taken = 0;
        for (int j : order) {
            if (j == i) continue;
            adjacency(i, j) = 1.0;
            adjacency(j, i) = 1.0;
            if (++taken == k) break;
        }
    }

    GraphLaplacian lap;
    lap.kind = GraphKind::KNN;
    lap.k = k;
    lap.matrix = Matrix(adjacency.rowwise().sum().asDiagonal()) - adjacency;
    return lap;
}

std::vector<int> kmeans(const Matrix& X, int k, std::uint64_t seed) {
    const int N = static_cast<int>(X.cols());
    if (k < 1 || k > N) throw InvalidInput("kmeans: require 1 <= k <= N");

    Rng rng(seed);
    Matrix centroids(X.rows(), k);

    // k-means++ seeding.
    centroids.col(0) = X.col(rng.below(static_cast<std::uint64_t>(N)));
    Vector nearest_sq = (X.colwise() - centroids.col(0)).colwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = nearest_sq.sum();
        int chosen = 0;
        if (total > 0.0) {
            double target = rng.uniform() * total;
            for (int i = 0; i < N; ++i) {
                target -= nearest_sq[i];
                if (target <= 0.0) {
                    chosen = i;
                    break;
                }
            }
        } else {
            chosen = static_cast<int>(rng.below(static_cast<std::uint64_t>(N)));
        }
        centroids.col(c) = X.col(chosen);
        nearest_sq =
            nearest_sq.cwiseMin((X.colwise() - centroids.col(c)).colwise().squaredNorm().transpose());
    }

    std::vector<int> assignment(N, 0);
    for (int round = 0; round < 100; ++round) {
        bool changed = false;
        for (int i = 0; i < N; ++i) {
            int best = 0;
            double best_dist = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = (X.col(i) - centroids.col(c)).squaredNorm();
                if (d < best_dist) {
                    best_dist = d;
                    best = c;
                }
            }
            if (assignment[i] != best) {
                assignment[i] = best;
                changed = true;
            }
        }

        std::vector<int> counts(k, 0);
        Matrix sums = Matrix::Zero(X.rows(), k);
        for (int i = 0; i < N; ++i) {
            ++counts[assignment[i]];
            sums.col(assignment[i]) += X.col(i);
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                centroids.col(c) = sums.col(c) / counts[c];
            } else {
                // Reseed an empty cluster to the point farthest from its centroid.
                int farthest = 0;
                double max_dist = -1.0;
                for (int i = 0; i < N; ++i) {
                    const double d = (X.col(i) - centroids.col(assignment[i])).squaredNorm();
                    if (d > max_dist) {
                        max_dist = d;
                        farthest = i;
                    }
                }
                centroids.col(c) = X.col(farthest);
                assignment[farthest] = c;
                changed = true;
            }
        }
        if (!changed) break;
    }
    return assignment;
}

GraphLaplacian within_cluster_laplacian(const std::vector<int>& assignment, int N) {
    if (static_cast<int>(assignment.size()) != N)
        throw ShapeMismatch("within_cluster_laplacian: assignment length != N");
    const auto sizes = cluster_sizes(assignment);

    Matrix L = Matrix::Identity(N, N);
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            if (assignment[i] == assignment[j]) L(i, j) -= 1.0 / sizes[assignment[i]];
        }
    }

    GraphLaplacian lap;
    lap.kind = GraphKind::WithinCluster;
    lap.k = static_cast<int>(sizes.size());
    lap.matrix = std::move(L);
    return lap;
}

GraphLaplacian between_cluster_laplacian(const std::vector<int>& assignment, int N) {
    if (static_cast<int>(assignment.size()) != N)
        throw ShapeMismatch("between_cluster_laplacian: assignment length != N");
    const auto sizes = cluster_sizes(assignment);
    const int k = static_cast<int>(sizes.size());

    Matrix L = Matrix::Zero(N, N);
    for (int c = 0; c < k; ++c) {
        if (sizes[c] == 0) continue;
        Vector diff = Vector::Constant(N, -1.0 / N);
        for (int i = 0; i < N; ++i) {
            if (assignment[i] == c) diff[i] += 1.0 / sizes[c];
        }
        L += sizes[c] * (diff * diff.transpose());
    }

    GraphLaplacian lap;
    lap.kind = GraphKind::BetweenCluster;
    lap.k = k;
    lap.matrix = std::move(L);
    return lap;
}

GraphLaplacian laplacian_for_training(GraphKind kind, const Matrix& X, int k,
                                      std::uint64_t seed) {
    const int N = static_cast<int>(X.cols());
    if (k == 0) {
        if (kind == GraphKind::KNN) {
            GraphLaplacian lap;
            lap.kind = kind;
            lap.k = 0;
            lap.matrix = Matrix::Zero(N, N);
            return lap;
        }
        k = 1;
    }
    switch (kind) {
        case GraphKind::KNN:
            return knn_laplacian(X, k);
        case GraphKind::WithinCluster:
            return within_cluster_laplacian(kmeans(X, k, seed), N);
        case GraphKind::BetweenCluster:
            return between_cluster_laplacian(kmeans(X, k, seed), N);
    }
    throw InvalidInput("laplacian_for_training: unknown graph kind");
}

}  // namespace grmssvdd
