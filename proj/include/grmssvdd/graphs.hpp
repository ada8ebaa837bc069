#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "grmssvdd/common.hpp"

namespace grmssvdd {

enum class GraphKind { KNN, WithinCluster, BetweenCluster };

std::string to_string(GraphKind kind);

/// Symmetric PSD graph Laplacian over N instances of one modality.
struct GraphLaplacian {
    GraphKind kind = GraphKind::KNN;
    Matrix matrix;
    int k = 0;
};

/// L = D - A over the symmetrized union k-NN adjacency: A_ij = 1 iff j is
/// among the k nearest Euclidean neighbors of i or i among those of j.
/// Ties are broken by lower index.
GraphLaplacian knn_laplacian(const Matrix& X, int k);

/// Seeded k-means++ with Lloyd iterations until the assignment stops
/// changing (at most 100 rounds). Empty clusters are reseeded to the point
/// farthest from its current centroid.
std::vector<int> kmeans(const Matrix& X, int k, std::uint64_t seed);

/// L_w = I - sum_c (1/N_c) 1_c 1_c^T; an orthogonal projector.
GraphLaplacian within_cluster_laplacian(const std::vector<int>& assignment, int N);

/// L_b = sum_c N_c (m_c - g)(m_c - g)^T with m_c the normalized cluster
/// indicator and g the all-1/N vector.
GraphLaplacian between_cluster_laplacian(const std::vector<int>& assignment, int N);

/// Laplacian for one modality's training inputs, honoring the k = 0
/// convention: KNN degenerates to the zero matrix, cluster Laplacians treat
/// k as 1.
GraphLaplacian laplacian_for_training(GraphKind kind, const Matrix& X, int k,
                                      std::uint64_t seed);

}  // namespace grmssvdd
