#include <doctest.h>

#include <cmath>
#include <set>

#include "sbmf/init.hpp"
#include "sbmf/loss.hpp"
#include "sbmf/sbm.hpp"

using namespace sbmf;

TEST_CASE("spectral_embedding columns are orthonormal eigenvectors") {
    const HardAssignment truth = sample_assignment(60, 2, {30, 30}, 5);
    const AdjacencyMatrix A = sample_sbm(BlockParams(0.5, 0.05, 2), truth, 5);
    Rng rng(0);
    const Eigen::MatrixXd emb = spectral_embedding(A, 2, rng);
    REQUIRE(emb.cols() == 2);
    const Eigen::MatrixXd gram = emb.transpose() * emb;
    CHECK((gram - Eigen::MatrixXd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
    // A v = theta v for each column
    const Eigen::MatrixXd Av = A.multiply(emb);
    for (int c = 0; c < 2; ++c) {
        const double theta = emb.col(c).dot(Av.col(c));
        CHECK((Av.col(c) - theta * emb.col(c)).norm() < 1e-8 * std::abs(theta));
    }
}

TEST_CASE("lanczos path matches the dense path on eigenvalues") {
    const HardAssignment truth = sample_assignment(120, 3, {40, 40, 40}, 8);
    const AdjacencyMatrix A = sample_sbm(BlockParams(0.4, 0.05, 3), truth, 8);
    Rng r1(3), r2(4);
    const Eigen::MatrixXd dense = spectral_embedding(A, 3, r1);          // dense branch
    const Eigen::MatrixXd sparse = spectral_embedding(A, 3, r2, 10);     // forced Lanczos
    const Eigen::MatrixXd Ad = A.multiply(dense), As = A.multiply(sparse);
    for (int c = 0; c < 3; ++c) {
        const double theta_d = dense.col(c).dot(Ad.col(c));
        const double theta_s = sparse.col(c).dot(As.col(c));
        CHECK(theta_d == doctest::Approx(theta_s).epsilon(1e-7));
    }
}

TEST_CASE("kmeans separates two well-split point clouds") {
    Rng rng(11);
    Eigen::MatrixXd pts(40, 2);
    for (int i = 0; i < 20; ++i) pts.row(i) << 0.0 + 0.1 * rng.normal(), 0.1 * rng.normal();
    for (int i = 20; i < 40; ++i) pts.row(i) << 10.0 + 0.1 * rng.normal(), 0.1 * rng.normal();
    Rng km_rng(2);
    const KMeansResult res = kmeans(pts, 2, km_rng);
    const std::set<int> left(res.labels.begin(), res.labels.begin() + 20);
    const std::set<int> right(res.labels.begin() + 20, res.labels.end());
    CHECK(left.size() == 1);
    CHECK(right.size() == 1);
    CHECK(*left.begin() != *right.begin());
    CHECK(res.inertia < 40 * 0.1);
}

TEST_CASE("kmeans needs at least k points") {
    Rng rng(0);
    CHECK_THROWS_AS(kmeans(Eigen::MatrixXd::Zero(1, 2), 2, rng), std::invalid_argument);
}

TEST_CASE("spectral_init") {
    SUBCASE("deterministic in the seed") {
        const HardAssignment truth = sample_assignment(80, 2, {40, 40}, 1);
        const AdjacencyMatrix A = sample_sbm(BlockParams(0.4, 0.05, 2), truth, 1);
        CHECK(spectral_init(A, 2, 7) == spectral_init(A, 2, 7));
    }
    SUBCASE("near-exact recovery in a strong regime") {
        int good = 0;
        for (int seed = 0; seed < 10; ++seed) {
            const HardAssignment truth = sample_assignment(150, 3, {50, 50, 50}, seed);
            const AdjacencyMatrix A = sample_sbm(BlockParams(0.5, 0.05, 3), truth, seed + 40);
            const HardAssignment z0 = spectral_init(A, 3, static_cast<std::uint64_t>(seed));
            if (misclustered_count(z0, truth) <= 5) ++good;
        }
        CHECK(good >= 9);
    }
    SUBCASE("k = 1 shortcut") {
        const AdjacencyMatrix A(5, {{0, 1}});
        const HardAssignment z = spectral_init(A, 1, 0);
        CHECK(z.communities() == 1);
        CHECK(z.community_sizes()[0] == 5);
    }
}

TEST_CASE("corrupt_truth") {
    const HardAssignment truth = sample_assignment(100, 4, {25, 25, 25, 25}, 6);
    SUBCASE("corrupts exactly floor(fraction * n) nodes, all to wrong labels") {
        const CorruptResult res = corrupt_truth(truth, 0.15, 3);
        CHECK(res.corrupted == 15);
        const HardAssignment z = harden(res.pi);
        int changed = 0;
        for (int i = 0; i < 100; ++i)
            if (z.label(i) != truth.label(i)) ++changed;
        CHECK(changed == 15);
    }
    SUBCASE("zero fraction is the truth itself") {
        const CorruptResult res = corrupt_truth(truth, 0.0, 9);
        CHECK(res.corrupted == 0);
        CHECK(harden(res.pi) == truth);
    }
    SUBCASE("deterministic in the seed, fraction bounds enforced") {
        CHECK(harden(corrupt_truth(truth, 0.3, 5).pi) == harden(corrupt_truth(truth, 0.3, 5).pi));
        CHECK_THROWS_AS(corrupt_truth(truth, 1.0, 0), std::invalid_argument);
        CHECK_THROWS_AS(corrupt_truth(truth, -0.1, 0), std::invalid_argument);
    }
}
