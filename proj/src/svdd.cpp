#include "grmssvdd/svdd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace grmssvdd {

namespace {

// Stop once the worst KKT violation falls below this. Tighter than the
// duality-gap budget downstream consumers rely on, so the achieved dual
// objective sits well inside a 1e-6 tolerance of the true optimum.
constexpr double kStopTol = 1e-8;
constexpr int kMaxSweeps = 10000;

}  // namespace

SvddSolution solve_svdd(const Matrix& Y, double C) {
    const Eigen::Index N = Y.cols();
    if (N == 0) throw InvalidInput("solve_svdd: empty training matrix");
    if (C < 1.0 / static_cast<double>(N))
        throw InfeasibleC("solve_svdd: need C >= 1/N for a feasible dual");

    const Matrix G = Y.transpose() * Y;
    const Vector diag = G.diagonal();

    Vector alpha = Vector::Constant(N, 1.0 / static_cast<double>(N));
    Vector Galpha = G * alpha;

    double violation = 0.0;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        // f_i is the dual gradient; at optimality all free coordinates share
        // one multiplier, bounded ones may only deviate inward.
        int up = -1, low = -1;
        double f_up = -std::numeric_limits<double>::infinity();
        double f_low = std::numeric_limits<double>::infinity();
        for (Eigen::Index i = 0; i < N; ++i) {
            const double f = diag[i] - 2.0 * Galpha[i];
            if (alpha[i] < C && f > f_up) {
                f_up = f;
                up = static_cast<int>(i);
            }
            if (alpha[i] > 0.0 && f < f_low) {
                f_low = f;
                low = static_cast<int>(i);
            }
        }
        violation = (up >= 0 && low >= 0) ? f_up - f_low : 0.0;
        if (violation < kStopTol) break;

        const double eta = diag[up] + diag[low] - 2.0 * G(up, low);
        double step;
        if (eta > 0.0) {
            step = violation / (2.0 * eta);
        } else {
            step = std::numeric_limits<double>::infinity();
        }
        step = std::min({step, C - alpha[up], alpha[low]});
        if (!(step > 0.0)) break;

        alpha[up] += step;
        alpha[low] -= step;
        Galpha += step * (G.col(up) - G.col(low));
    }

    SvddSolution sol;
    sol.alpha = alpha;
    sol.C = C;
    sol.kkt_tol = std::max(violation, 0.0);
    sol.center = Y * alpha;

    const double bound_slack = std::max(1e-12, 1e-9 * C);
    for (Eigen::Index i = 0; i < N; ++i) {
        if (alpha[i] > bound_slack) {
            sol.support_indices.push_back(static_cast<int>(i));
            if (alpha[i] < C - bound_slack)
                sol.boundary_indices.push_back(static_cast<int>(i));
        }
    }

    double r_sq = 0.0;
    if (!sol.boundary_indices.empty()) {
        for (int i : sol.boundary_indices)
            r_sq += (Y.col(i) - sol.center).squaredNorm();
        r_sq /= static_cast<double>(sol.boundary_indices.size());
    } else {
        for (int i : sol.support_indices)
            r_sq = std::max(r_sq, (Y.col(i) - sol.center).squaredNorm());
    }
    sol.radius = std::sqrt(std::max(r_sq, 0.0));
    return sol;
}

double score(const SvddSolution& solution, const Vector& y) {
    if (y.size() != solution.center.size())
        throw ShapeMismatch("score: vector length does not match center dimension");
    return (y - solution.center).squaredNorm() - solution.radius_sq();
}

}  // namespace grmssvdd
