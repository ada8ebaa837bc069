#pragma once

#include <vector>

#include "grmssvdd/common.hpp"

namespace grmssvdd {

struct SvddSolution {
    Vector alpha;   // dual coefficients, length N_total
    Vector center;  // a = Y alpha
    double radius = 0.0;
    double C = 1.0;
    double kkt_tol = 0.0;  // max KKT violation at termination
    std::vector<int> support_indices;   // alpha_i > 0
    std::vector<int> boundary_indices;  // 0 < alpha_i < C

    double radius_sq() const { return radius * radius; }
};

// Maximizes sum_i alpha_i y_i'y_i - alpha' Y'Y alpha subject to
// sum alpha = 1, 0 <= alpha <= C, via pairwise coordinate ascent on the
// maximally violating pair.
SvddSolution solve_svdd(const Matrix& Y, double C);

// ||y - a||^2 - R^2; <= 0 means target class.
double score(const SvddSolution& solution, const Vector& y);

}  // namespace grmssvdd
