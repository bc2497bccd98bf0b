#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <vector>

#include "sbmf/loss.hpp"
#include "sbmf/rng.hpp"
#include "sbmf/sbm.hpp"

using namespace sbmf;

namespace {

// Exhaustive enumeration over all k! column bijections.
double brute_force_l1(const Eigen::MatrixXd& pi, const Eigen::MatrixXd& ref) {
    const int k = static_cast<int>(pi.cols());
    std::vector<int> perm(static_cast<std::size_t>(k));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double total = 0.0;
        for (int a = 0; a < k; ++a)
            total += (pi.col(a) - ref.col(perm[static_cast<std::size_t>(a)])).cwiseAbs().sum();
        best = std::min(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

Eigen::MatrixXd random_soft(int n, int k, Rng& rng) {
    Eigen::MatrixXd m(n, k);
    for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int a = 0; a < k; ++a) {
            m(i, a) = -std::log(1.0 - rng.uniform());
            sum += m(i, a);
        }
        m.row(i) /= sum;
    }
    return m;
}

}  // namespace

TEST_CASE("l1_loss basics") {
    const HardAssignment z = sample_assignment(10, 2, {5, 5}, 3);
    SUBCASE("identity gives zero") { CHECK(l1_loss(z, z).loss == 0.0); }
    SUBCASE("column swap gives zero (label invariance)") {
        std::vector<int> flipped = z.labels();
        for (int& l : flipped) l = 1 - l;
        CHECK(l1_loss(HardAssignment(flipped, 2), z).loss == 0.0);
    }
    SUBCASE("hand instance") {
        // truth rows (e1, e1, e2) vs pi rows (e1, e2, e2): identity 2, swap 4
        const HardAssignment z_star({0, 0, 1}, 2);
        const HardAssignment pi({0, 1, 1}, 2);
        CHECK(l1_loss(pi, z_star).loss == 2.0);
    }
    SUBCASE("dimension mismatch") {
        CHECK_THROWS_AS(l1_loss(sample_assignment(8, 2, {4, 4}, 0), z), std::invalid_argument);
    }
}

TEST_CASE("l1_loss equals brute force on random instances") {
    Rng rng(99);
    for (int trial = 0; trial < 60; ++trial) {
        const int k = 2 + static_cast<int>(rng.uniform_index(5));
        const int n = k + static_cast<int>(rng.uniform_index(40));
        const Eigen::MatrixXd pi =
            trial % 2 == 0 ? random_soft(n, k, rng)
                           : [&] {
                                 std::vector<int> labels(static_cast<std::size_t>(n));
                                 for (int& l : labels)
                                     l = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k)));
                                 return HardAssignment(labels, k).matrix();
                             }();
        std::vector<int> truth_labels(static_cast<std::size_t>(n));
        for (int& l : truth_labels) l = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k)));
        const Eigen::MatrixXd ref = HardAssignment(truth_labels, k).matrix();
        const double fast = l1_loss(pi, ref).loss;
        CHECK(fast == doctest::Approx(brute_force_l1(pi, ref)).epsilon(1e-12));
        CHECK(fast >= 0.0);
        CHECK(fast <= 2.0 * n);
    }
}

TEST_CASE("misclustered_count") {
    const HardAssignment z = sample_assignment(10, 2, {5, 5}, 1);
    SUBCASE("identical gives zero") { CHECK(misclustered_count(z, z) == 0); }
    SUBCASE("single flipped row") {
        std::vector<int> labels = z.labels();
        labels[4] = 1 - labels[4];
        CHECK(misclustered_count(HardAssignment(labels, 2), z) == 1);
    }
    SUBCASE("equals l1/2 and brute-force Hamming minimum on random pairs") {
        Rng rng(7);
        for (int trial = 0; trial < 40; ++trial) {
            const int k = 2 + static_cast<int>(rng.uniform_index(5));
            const int n = k + static_cast<int>(rng.uniform_index(40));
            std::vector<int> la(static_cast<std::size_t>(n)), lb(static_cast<std::size_t>(n));
            for (int& l : la) l = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k)));
            for (int& l : lb) l = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k)));
            const HardAssignment a(la, k), b(lb, k);
            const int mis = misclustered_count(a, b);
            CHECK(mis == doctest::Approx(l1_loss(a, b).loss / 2.0));
            CHECK(mis == doctest::Approx(brute_force_l1(a.matrix(), b.matrix()) / 2.0));
        }
    }
}

TEST_CASE("l1_loss reports the minimizing bijection") {
    const HardAssignment z_star({0, 0, 1}, 2);
    const HardAssignment pi({1, 1, 0}, 2);  // pure relabel of the truth
    const LossResult res = l1_loss(pi, z_star);
    CHECK(res.loss == 0.0);
    CHECK(res.perm == std::vector<int>{1, 0});
}
