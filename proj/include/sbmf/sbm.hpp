#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sbmf/assignment.hpp"
#include "sbmf/graph.hpp"
#include "sbmf/rng.hpp"

namespace sbmf {

/// Assignment with the requested community sizes, node order permuted by
/// the seed (Fisher-Yates).
inline HardAssignment sample_assignment(int n, int k, const std::vector<int>& sizes,
                                        std::uint64_t seed) {
    if (k < 2) throw std::invalid_argument("sample_assignment: k must be >= 2");
    if (static_cast<int>(sizes.size()) != k)
        throw std::invalid_argument("sample_assignment: sizes.size() != k");
    for (const int s : sizes)
        if (s < 1) throw std::invalid_argument("sample_assignment: community sizes must be >= 1");
    if (std::accumulate(sizes.begin(), sizes.end(), 0) != n)
        throw std::invalid_argument("sample_assignment: sizes do not sum to n");

    std::vector<int> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (int a = 0; a < k; ++a)
        labels.insert(labels.end(), static_cast<std::size_t>(sizes[static_cast<std::size_t>(a)]), a);

    Rng rng(seed);
    for (int i = n - 1; i > 0; --i) {
        const auto j = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(i) + 1));
        std::swap(labels[static_cast<std::size_t>(i)], labels[static_cast<std::size_t>(j)]);
    }
    return HardAssignment(std::move(labels), k);
}

inline std::vector<int> balanced_sizes(int n, int k) {
    std::vector<int> sizes(static_cast<std::size_t>(k), n / k);
    for (int a = 0; a < n % k; ++a) ++sizes[static_cast<std::size_t>(a)];
    return sizes;
}

/// Graph with independent Bernoulli(p) within-community edges and
/// Bernoulli(q) cross edges, upper triangle in row-major order.
inline AdjacencyMatrix sample_sbm(const BlockParams& params, const HardAssignment& assignment,
                                  std::uint64_t seed) {
    if (assignment.communities() != params.k)
        throw std::invalid_argument("sample_sbm: community count mismatch");
    const int n = assignment.size();
    Rng rng(seed);
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double prob =
                assignment.label(i) == assignment.label(j) ? params.p : params.q;
            if (rng.uniform() < prob) edges.emplace_back(i, j);
        }
    return AdjacencyMatrix(n, edges);
}

}  // namespace sbmf
