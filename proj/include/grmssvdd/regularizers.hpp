#pragma once

#include <vector>

#include "grmssvdd/common.hpp"
#include "grmssvdd/graphs.hpp"

namespace grmssvdd {

// Ten regularizer variants. Ids 0-6 are built from a per-modality weight
// vector nu; ids 7-9 penalize through a graph Laplacian instead.
struct RegularizerSpec {
    int id = 0;
    double beta = 0.0;
    int k = 0;  // neighbor/cluster count, graph ids only

    void validate() const;
};

// Graph family used by ids 7-9.
GraphKind graph_kind_for(int id);

// nu per id: 0 -> zeros, 1/4 -> ones, 2/5 -> alpha_m, 3/6 -> alpha_m with
// outlier entries (alpha >= C - 1e-12) zeroed. Graph ids have no nu.
Vector build_nu(int id, const Vector& alpha_m, double C);

double omega_value(const RegularizerSpec& spec, const std::vector<Matrix>& Q,
                   const std::vector<Matrix>& X, const Matrix& alpha, double C,
                   const std::vector<GraphLaplacian>& laplacians);

Matrix omega_gradient(const RegularizerSpec& spec, int m, const std::vector<Matrix>& Q,
                      const std::vector<Matrix>& X, const Matrix& alpha, double C,
                      const std::vector<GraphLaplacian>& laplacians);

}  // namespace grmssvdd
