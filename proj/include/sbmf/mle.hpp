#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sbmf/assignment.hpp"
#include "sbmf/errors.hpp"
#include "sbmf/graph.hpp"
#include "sbmf/loss.hpp"
#include "sbmf/variational.hpp"

namespace sbmf {

/// Hard one-step update: row i moves to
/// argmax_b sum_{j != i} Z(j,b) (A_ij - lambda), ties to the smallest
/// index. All rows are computed from the input Z (batch semantics).
inline HardAssignment h_prime(const HardAssignment& z, double lambda, const AdjacencyMatrix& A) {
    if (z.size() != A.size()) throw std::invalid_argument("h_prime: dimension mismatch");
    const int n = z.size();
    const int k = z.communities();
    const std::vector<int> sizes = z.community_sizes();
    std::vector<int> labels(static_cast<std::size_t>(n));
    Eigen::VectorXd score(k);
    for (int i = 0; i < n; ++i) {
        // sum_{j != i} Z(j,b) (A_ij - lambda)
        //   = (#neighbors of i in b) - lambda * (|b| - [z_i == b])
        for (int b = 0; b < k; ++b)
            score[b] = -lambda * (sizes[static_cast<std::size_t>(b)] - (z.label(i) == b ? 1 : 0));
        A.for_each_neighbor(i, [&](int j) { score[z.label(j)] += 1.0; });
        int best = 0;
        for (int b = 1; b < k; ++b)
            if (score[b] > score[best]) best = b;
        labels[static_cast<std::size_t>(i)] = best;
    }
    return HardAssignment(std::move(labels), k);
}

struct MleResult {
    HardAssignment z;
    double p_hat;
    double q_hat;
};

/// Iterative maximum likelihood: each iteration estimates (p, q) from the
/// current partition, forms (t, lambda) by the log-odds formulas, and
/// applies the hard map h'. Estimates are clamped to [1/n^2, 1 - 1/n^2]
/// so the log-odds stay finite on degenerate graphs.
///
/// literal_ratio_estimator switches the (p, q) step to the printed
/// edges-over-nonedges ratio instead of the edges-over-pairs proportion,
/// for side-by-side comparison; the ratio is not a probability and is
/// clamped the same way.
inline std::pair<MleResult, IterationTrace> iterative_mle(
    const AdjacencyMatrix& A, int k, const HardAssignment& z0, int iterations,
    const std::optional<HardAssignment>& truth = std::nullopt,
    bool literal_ratio_estimator = false) {
    if (iterations < 1) throw std::invalid_argument("iterative_mle: iterations must be >= 1");
    if (z0.communities() != k || z0.size() != A.size())
        throw std::invalid_argument("iterative_mle: dimension mismatch");
    const int n = A.size();
    {
        const std::vector<int> sizes = z0.community_sizes();
        if (std::any_of(sizes.begin(), sizes.end(), [](int s) { return s == 0; }))
            throw std::invalid_argument("iterative_mle: initializer has an empty community");
    }
    const double lo = 1.0 / (static_cast<double>(n) * n);
    const double hi = 1.0 - lo;
    HardAssignment z = z0;
    double p_hat = 0.0, q_hat = 0.0;
    IterationTrace trace;
    for (int s = 0; s < iterations; ++s) {
        const auto start = std::chrono::steady_clock::now();
        const PairStats stats = pair_stats(z.matrix(), A);
        if (literal_ratio_estimator) {
            const double wd = stats.within_pairs - stats.within_edges;
            const double cd = stats.cross_pairs - stats.cross_edges;
            p_hat = wd > 0.0 ? stats.within_edges / wd : hi;
            q_hat = cd > 0.0 ? stats.cross_edges / cd : hi;
        } else {
            p_hat = stats.within_pairs > 0.0 ? stats.within_edges / stats.within_pairs : 0.0;
            q_hat = stats.cross_pairs > 0.0 ? stats.cross_edges / stats.cross_pairs : 0.0;
        }
        p_hat = std::clamp(p_hat, lo, hi);
        q_hat = std::clamp(q_hat, lo, hi);
        if (p_hat == q_hat)
            throw DegenerateSeparationError("iterative_mle: p_hat == q_hat", s);
        const double t = 0.5 * std::log(p_hat * (1.0 - q_hat) / ((1.0 - p_hat) * q_hat));
        const double lambda = std::log((1.0 - q_hat) / (1.0 - p_hat)) / (2.0 * t);
        z = h_prime(z, lambda, A);
        {
            const std::vector<int> sizes = z.community_sizes();
            if (std::any_of(sizes.begin(), sizes.end(), [](int c) { return c == 0; }))
                throw DegeneratePartitionError("iterative_mle: a community emptied out", s);
        }
        const double millis =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        IterationRecord rec{};
        rec.iteration = s;
        rec.loss = std::numeric_limits<double>::quiet_NaN();
        rec.misclustered = -1;
        if (truth) {
            rec.loss = l1_loss(z, *truth).loss;
            rec.misclustered = misclustered_count(z, *truth);
        }
        rec.elbo = std::numeric_limits<double>::quiet_NaN();
        rec.t = t;
        rec.lambda = lambda;
        rec.p_mean = p_hat;
        rec.q_mean = q_hat;
        rec.millis = millis;
        rec.non_assortative = t < 0.0;
        trace.records.push_back(rec);
    }
    return {MleResult{z, p_hat, q_hat}, std::move(trace)};
}

}  // namespace sbmf
