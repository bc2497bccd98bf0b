#pragma once

#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "sbmf/assignment.hpp"

namespace sbmf {

/// Minimum-cost perfect matching on a square cost matrix (Hungarian
/// algorithm with potentials, O(k^3)). Returns the column assigned to each
/// row.
inline std::vector<int> solve_assignment(const Eigen::MatrixXd& cost) {
    const int k = static_cast<int>(cost.rows());
    if (cost.cols() != k) throw std::invalid_argument("solve_assignment: cost must be square");
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // 1-based arrays, column 0 is the virtual root
    std::vector<double> u(static_cast<std::size_t>(k) + 1, 0.0);
    std::vector<double> v(static_cast<std::size_t>(k) + 1, 0.0);
    std::vector<int> match(static_cast<std::size_t>(k) + 1, 0);
    std::vector<int> way(static_cast<std::size_t>(k) + 1, 0);
    for (int i = 1; i <= k; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(k) + 1, kInf);
        std::vector<char> used(static_cast<std::size_t>(k) + 1, 0);
        do {
            used[static_cast<std::size_t>(j0)] = 1;
            const int i0 = match[static_cast<std::size_t>(j0)];
            double delta = kInf;
            int j1 = 0;
            for (int j = 1; j <= k; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                                   v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= k; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row_to_col(static_cast<std::size_t>(k), -1);
    for (int j = 1; j <= k; ++j)
        row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)]) - 1] = j - 1;
    return row_to_col;
}

struct LossResult {
    double loss;
    /// perm[a] = column of the truth matched to column a of pi.
    std::vector<int> perm;
};

/// Permutation-minimized entrywise l1 distance between a soft assignment
/// and a reference. The loss decomposes over columns, so the exact infimum
/// over the k! bijections reduces to a k-by-k linear assignment problem
/// with cost C(a,b) = sum_i |pi(i,a) - ref(i,b)|.
inline LossResult l1_loss(const Eigen::MatrixXd& pi, const Eigen::MatrixXd& ref) {
    if (pi.rows() != ref.rows() || pi.cols() != ref.cols())
        throw std::invalid_argument("l1_loss: dimension mismatch");
    const int k = static_cast<int>(pi.cols());
    Eigen::MatrixXd cost(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            cost(a, b) = (pi.col(a) - ref.col(b)).cwiseAbs().sum();
    std::vector<int> perm = solve_assignment(cost);
    double loss = 0.0;
    for (int a = 0; a < k; ++a) loss += cost(a, perm[static_cast<std::size_t>(a)]);
    return {loss, std::move(perm)};
}

inline LossResult l1_loss(const SoftAssignment& pi, const HardAssignment& z_star) {
    return l1_loss(pi.matrix(), z_star.matrix());
}

inline LossResult l1_loss(const HardAssignment& z, const HardAssignment& z_star) {
    return l1_loss(z.matrix(), z_star.matrix());
}

/// Permutation-minimized Hamming distance; for hard arguments this equals
/// l1_loss / 2 exactly.
inline int misclustered_count(const HardAssignment& z, const HardAssignment& z_star) {
    if (z.size() != z_star.size() || z.communities() != z_star.communities())
        throw std::invalid_argument("misclustered_count: dimension mismatch");
    const double loss = l1_loss(z, z_star).loss;
    return static_cast<int>(loss / 2.0 + 0.5);
}

}  // namespace sbmf
