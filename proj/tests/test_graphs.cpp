#include <doctest.h>

#include <grmssvdd/graphs.hpp>
#include <grmssvdd/rng.hpp>

#include <Eigen/Dense>
#include <set>

#include "test_util.hpp"

using namespace grmssvdd;

namespace {

void check_laplacian_algebra(const Matrix& L, bool zero_row_sums) {
    CHECK((L - L.transpose()).lpNorm<Eigen::Infinity>() < 1e-10);
    if (zero_row_sums)
        CHECK((L * Vector::Ones(L.cols())).lpNorm<Eigen::Infinity>() < 1e-8);
    Eigen::SelfAdjointEigenSolver<Matrix> es(L);
    CHECK(es.eigenvalues().minCoeff() > -1e-8);
}

}  // namespace

TEST_CASE("knn laplacian small cases") {
    Matrix two(1, 2);
    two << 0.0, 3.0;
    auto L = knn_laplacian(two, 1);
    Matrix expect(2, 2);
    expect << 1.0, -1.0, -1.0, 1.0;
    CHECK((L.matrix - expect).lpNorm<Eigen::Infinity>() < 1e-12);
    CHECK(L.kind == GraphKind::KNN);
    CHECK(L.k == 1);

    // Three equally spaced collinear points, k=1: the middle point is the
    // nearest neighbor of both ends, union symmetrization gives it degree 2.
    Matrix line(1, 3);
    line << 0.0, 1.0, 2.0;
    auto L3 = knn_laplacian(line, 1);
    CHECK(L3.matrix(0, 0) == doctest::Approx(1.0));
    CHECK(L3.matrix(1, 1) == doctest::Approx(2.0));
    CHECK(L3.matrix(2, 2) == doctest::Approx(1.0));
    CHECK(L3.matrix(0, 2) == doctest::Approx(0.0));

    CHECK_THROWS_AS(knn_laplacian(two, 2), InvalidInput);
    CHECK_THROWS_AS(knn_laplacian(two, 0), InvalidInput);
}

TEST_CASE("knn ties break toward the lower index") {
    // Point 0 at the origin, points 1 and 2 both at distance 1.
    Matrix X(2, 3);
    X << 0.0, 1.0, -1.0, 0.0, 0.0, 0.0;
    auto L = knn_laplacian(X, 1);
    // 0 picks 1 (tie with 2 broken by index); 1 and 2 both pick 0.
    CHECK(L.matrix(0, 1) == doctest::Approx(-1.0));
    CHECK(L.matrix(0, 2) == doctest::Approx(-1.0));  // union with 2 -> 0
    CHECK(L.matrix(1, 2) == doctest::Approx(0.0));
}

TEST_CASE("knn laplacian algebra on random data") {
    grmssvdd::Rng rng(121);
    Matrix X = testing::random_matrix(4, 12, rng);
    for (int k : {1, 3, 11}) {
        auto L = knn_laplacian(X, k);
        check_laplacian_algebra(L.matrix, true);
        for (int i = 0; i < 12; ++i) {
            CHECK(L.matrix(i, i) >= 0.0);  // degree, no self loops
            for (int j = 0; j < 12; ++j)
                if (i != j) CHECK((L.matrix(i, j) == 0.0 || L.matrix(i, j) == -1.0));
        }
    }
}

TEST_CASE("kmeans separates blobs and respects the seed") {
    grmssvdd::Rng rng(131);
    Matrix X(2, 10);
    for (int i = 0; i < 5; ++i) {
        X.col(i) = Vector::Constant(2, 0.0) + 0.05 * testing::random_matrix(2, 1, rng);
        X.col(5 + i) = Vector::Constant(2, 10.0) + 0.05 * testing::random_matrix(2, 1, rng);
    }
    auto assign = kmeans(X, 2, 7);
    REQUIRE(assign.size() == 10);
    for (int i = 1; i < 5; ++i) {
        CHECK(assign[static_cast<std::size_t>(i)] == assign[0]);
        CHECK(assign[static_cast<std::size_t>(5 + i)] == assign[5]);
    }
    CHECK(assign[0] != assign[5]);

    CHECK(kmeans(X, 2, 7) == assign);

    auto singletons = kmeans(X, 10, 3);
    std::set<int> distinct(singletons.begin(), singletons.end());
    CHECK(distinct.size() == 10);

    CHECK_THROWS_AS(kmeans(X, 11, 0), InvalidInput);
    CHECK_THROWS_AS(kmeans(X, 0, 0), InvalidInput);
}

TEST_CASE("within-cluster laplacian") {
    auto both = within_cluster_laplacian({0, 0}, 2);
    Matrix expect(2, 2);
    expect << 0.5, -0.5, -0.5, 0.5;
    CHECK((both.matrix - expect).lpNorm<Eigen::Infinity>() < 1e-12);

    auto singles = within_cluster_laplacian({0, 1, 2}, 3);
    CHECK(singles.matrix.lpNorm<Eigen::Infinity>() < 1e-12);

    grmssvdd::Rng rng(141);
    std::vector<int> assign;
    for (int i = 0; i < 9; ++i) assign.push_back(static_cast<int>(rng.below(3)));
    assign[0] = 0;
    assign[1] = 1;
    assign[2] = 2;  // keep all clusters inhabited
    auto L = within_cluster_laplacian(assign, 9);
    check_laplacian_algebra(L.matrix, true);
    CHECK((L.matrix * L.matrix - L.matrix).lpNorm<Eigen::Infinity>() < 1e-10);
}

TEST_CASE("between-cluster laplacian") {
    auto one = between_cluster_laplacian({0, 0, 0}, 3);
    CHECK(one.matrix.lpNorm<Eigen::Infinity>() < 1e-12);

    auto two = between_cluster_laplacian({0, 1}, 2);
    Matrix expect(2, 2);
    expect << 0.5, -0.5, -0.5, 0.5;
    CHECK((two.matrix - expect).lpNorm<Eigen::Infinity>() < 1e-12);

    grmssvdd::Rng rng(151);
    std::vector<int> assign;
    for (int i = 0; i < 11; ++i) assign.push_back(static_cast<int>(rng.below(4)));
    for (int c = 0; c < 4; ++c) assign[static_cast<std::size_t>(c)] = c;
    auto L = between_cluster_laplacian(assign, 11);
    check_laplacian_algebra(L.matrix, true);
}

TEST_CASE("k=0 grid convention") {
    grmssvdd::Rng rng(161);
    Matrix X = testing::random_matrix(3, 6, rng);

    auto knn0 = laplacian_for_training(GraphKind::KNN, X, 0, 1);
    CHECK(knn0.matrix.lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(knn0.k == 0);

    auto within0 = laplacian_for_training(GraphKind::WithinCluster, X, 0, 1);
    auto within1 = laplacian_for_training(GraphKind::WithinCluster, X, 1, 1);
    CHECK((within0.matrix - within1.matrix).lpNorm<Eigen::Infinity>() == 0.0);

    auto between0 = laplacian_for_training(GraphKind::BetweenCluster, X, 0, 1);
    CHECK(between0.matrix.lpNorm<Eigen::Infinity>() < 1e-12);  // one cluster

    auto knn2 = laplacian_for_training(GraphKind::KNN, X, 2, 1);
    CHECK((knn2.matrix - knn_laplacian(X, 2).matrix).lpNorm<Eigen::Infinity>() == 0.0);
}

TEST_CASE("graph construction is reproducible") {
    grmssvdd::Rng rng(171);
    Matrix X = testing::random_matrix(5, 15, rng);
    auto a = kmeans(X, 4, 99);
    auto b = kmeans(X, 4, 99);
    CHECK(a == b);
    auto La = laplacian_for_training(GraphKind::BetweenCluster, X, 4, 99);
    auto Lb = laplacian_for_training(GraphKind::BetweenCluster, X, 4, 99);
    CHECK((La.matrix - Lb.matrix).lpNorm<Eigen::Infinity>() == 0.0);
}
