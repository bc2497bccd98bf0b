#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sbmf/assignment.hpp"
#include "sbmf/graph.hpp"
#include "sbmf/rng.hpp"

namespace sbmf {

namespace detail {

/// Lanczos with full reorthogonalization; returns the k eigenpairs of A
/// with largest absolute eigenvalue, to residual tolerance tol * ||A||.
inline std::pair<Eigen::VectorXd, Eigen::MatrixXd> lanczos_topk(const AdjacencyMatrix& A, int k,
                                                                Rng& rng, double tol = 1e-8) {
    const int n = A.size();
    int m = std::min(n, std::max(6 * k + 20, 50));
    for (;;) {
        Eigen::MatrixXd V(n, m + 1);
        Eigen::VectorXd alpha(m), beta(m);
        Eigen::VectorXd v(n);
        for (int i = 0; i < n; ++i) v[i] = rng.normal();
        v.normalize();
        V.col(0) = v;
        int steps = m;
        for (int j = 0; j < m; ++j) {
            Eigen::VectorXd w = A.multiply(V.col(j));
            alpha[j] = V.col(j).dot(w);
            w -= alpha[j] * V.col(j);
            if (j > 0) w -= beta[j - 1] * V.col(j - 1);
            // full reorthogonalization, twice
            for (int pass = 0; pass < 2; ++pass)
                w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * w);
            beta[j] = w.norm();
            if (beta[j] < 1e-14) {  // invariant subspace found
                steps = j + 1;
                break;
            }
            V.col(j + 1) = w / beta[j];
        }
        Eigen::MatrixXd T = Eigen::MatrixXd::Zero(steps, steps);
        for (int j = 0; j < steps; ++j) {
            T(j, j) = alpha[j];
            if (j + 1 < steps) T(j, j + 1) = T(j + 1, j) = beta[j];
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("lanczos_topk: tridiagonal eigensolver failed");
        // Ritz pairs sorted by |theta| descending
        std::vector<int> order(static_cast<std::size_t>(steps));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
        });
        if (steps >= k) {
            const double scale = std::max(1.0, std::abs(es.eigenvalues()[order[0]]));
            bool converged = true;
            for (int r = 0; r < k; ++r) {
                const double resid =
                    (steps == m) ? std::abs(beta[steps - 1] * es.eigenvectors()(steps - 1, order[static_cast<std::size_t>(r)]))
                                 : 0.0;
                if (resid > tol * scale) converged = false;
            }
            if (converged || steps == n) {
                Eigen::VectorXd vals(k);
                Eigen::MatrixXd vecs(n, k);
                for (int r = 0; r < k; ++r) {
                    vals[r] = es.eigenvalues()[order[static_cast<std::size_t>(r)]];
                    vecs.col(r) = V.leftCols(steps) * es.eigenvectors().col(order[static_cast<std::size_t>(r)]);
                    vecs.col(r).normalize();
                }
                return {vals, vecs};
            }
        }
        if (m >= n)
            throw std::runtime_error("lanczos_topk: no convergence at full dimension (n=" +
                                     std::to_string(n) + ", k=" + std::to_string(k) + ")");
        m = std::min(n, 2 * m);
    }
}

}  // namespace detail

/// Leading-|eigenvalue| spectral embedding of the adjacency matrix:
/// dense symmetric solve up to kDenseEigenLimit nodes, Lanczos above.
inline Eigen::MatrixXd spectral_embedding(const AdjacencyMatrix& A, int k, Rng& rng,
                                          int dense_limit = 2000) {
    const int n = A.size();
    if (n < k) throw std::invalid_argument("spectral_embedding: need n >= k");
    if (n <= dense_limit) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A.to_dense());
        if (es.info() != Eigen::Success)
            throw std::runtime_error("spectral_embedding: dense eigensolver failed");
        std::vector<int> order(static_cast<std::size_t>(n));
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            return std::abs(es.eigenvalues()[a]) > std::abs(es.eigenvalues()[b]);
        });
        Eigen::MatrixXd emb(n, k);
        for (int r = 0; r < k; ++r) emb.col(r) = es.eigenvectors().col(order[static_cast<std::size_t>(r)]);
        return emb;
    }
    return detail::lanczos_topk(A, k, rng).second;
}

struct KMeansResult {
    std::vector<int> labels;
    double inertia;
};

/// Lloyd iterations with k-means++ seeding. Deterministic given the rng
/// state; ties in the nearest-center rule go to the smallest index.
inline KMeansResult kmeans(const Eigen::MatrixXd& points, int k, Rng& rng,
                           int max_iterations = 100) {
    const int n = static_cast<int>(points.rows());
    if (n < k) throw std::invalid_argument("kmeans: need n >= k");
    Eigen::MatrixXd centers(k, points.cols());
    // k-means++ seeding
    centers.row(0) = points.row(static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::uint64_t>(n))));
    Eigen::VectorXd d2 = (points.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (int c = 1; c < k; ++c) {
        const double total = d2.sum();
        int pick = 0;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                acc += d2[i];
                if (target < acc) {
                    pick = i;
                    break;
                }
                pick = i;
            }
        } else {
            pick = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        }
        centers.row(c) = points.row(pick);
        d2 = d2.cwiseMin((points.rowwise() - centers.row(c)).rowwise().squaredNorm());
    }

    std::vector<int> labels(static_cast<std::size_t>(n), 0);
    for (int iter = 0; iter < max_iterations; ++iter) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (points.row(i) - centers.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d = (points.row(i) - centers.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (labels[static_cast<std::size_t>(i)] != best) {
                labels[static_cast<std::size_t>(i)] = best;
                changed = true;
            }
        }
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, points.cols());
        Eigen::VectorXi counts = Eigen::VectorXi::Zero(k);
        for (int i = 0; i < n; ++i) {
            sums.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
            ++counts[labels[static_cast<std::size_t>(i)]];
        }
        for (int c = 0; c < k; ++c) {
            if (counts[c] > 0) {
                centers.row(c) = sums.row(c) / counts[c];
            } else {
                // relocate an empty cluster to the point farthest from its center
                int far = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const double d =
                        (points.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
                    if (d > far_d) {
                        far_d = d;
                        far = i;
                    }
                }
                centers.row(c) = points.row(far);
                labels[static_cast<std::size_t>(far)] = c;
                changed = true;
            }
        }
        if (!changed && iter > 0) break;
    }
    double inertia = 0.0;
    for (int i = 0; i < n; ++i)
        inertia += (points.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
    return {std::move(labels), inertia};
}

/// Spectral clustering initializer: k leading eigenvectors of A (by
/// absolute eigenvalue) as the embedding, then seeded k-means with 10
/// restarts; the best-inertia restart wins, ties by restart index.
inline HardAssignment spectral_init(const AdjacencyMatrix& A, int k, std::uint64_t seed,
                                    int restarts = 10) {
    const int n = A.size();
    if (n < k) throw std::invalid_argument("spectral_init: need n >= k");
    if (k == 1) return HardAssignment(std::vector<int>(static_cast<std::size_t>(n), 0), 1);
    Rng rng(seed);
    Rng eig_rng = rng.split(0);
    const Eigen::MatrixXd emb = spectral_embedding(A, k, eig_rng);
    KMeansResult best{{}, std::numeric_limits<double>::infinity()};
    for (int r = 0; r < restarts; ++r) {
        Rng restart_rng = rng.split(static_cast<std::uint64_t>(r) + 1);
        KMeansResult res = kmeans(emb, k, restart_rng);
        if (res.inertia < best.inertia) best = std::move(res);
    }
    return HardAssignment(std::move(best.labels), k);
}

struct CorruptResult {
    SoftAssignment pi;
    int corrupted;
};

/// Truth with floor(fraction * n) uniformly chosen nodes reassigned to
/// uniformly chosen wrong communities, embedded in the soft set. The
/// achieved initial loss is 2 * corrupted before any relabeling gain.
inline CorruptResult corrupt_truth(const HardAssignment& z_star, double fraction,
                                   std::uint64_t seed) {
    if (!(fraction >= 0.0) || !(fraction < 1.0))
        throw std::invalid_argument("corrupt_truth: fraction must lie in [0, 1)");
    const int n = z_star.size();
    const int k = z_star.communities();
    const int m = k < 2 ? 0 : static_cast<int>(fraction * n);
    std::vector<int> labels = z_star.labels();
    Rng rng(seed);
    std::vector<int> nodes(static_cast<std::size_t>(n));
    std::iota(nodes.begin(), nodes.end(), 0);
    for (int c = 0; c < m; ++c) {
        const auto pick = c + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n - c)));
        std::swap(nodes[static_cast<std::size_t>(c)], nodes[static_cast<std::size_t>(pick)]);
        const int i = nodes[static_cast<std::size_t>(c)];
        const auto shift = 1 + static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(k - 1)));
        labels[static_cast<std::size_t>(i)] = (labels[static_cast<std::size_t>(i)] + shift) % k;
    }
    return {SoftAssignment::from_hard(HardAssignment(std::move(labels), k)), m};
}

}  // namespace sbmf
