#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace sbmf {

/// Symmetric binary adjacency matrix with zero diagonal.
///
/// Dense bitset rows up to kDenseLimit nodes, CSR above. Immutable after
/// construction; all accessors are const and thread-safe.
class AdjacencyMatrix {
public:
    static constexpr int kDenseLimit = 10000;

    /// Build from an upper-triangular edge list (i < j required).
    AdjacencyMatrix(int n, const std::vector<std::pair<int, int>>& edges)
        : n_(n), dense_(n <= kDenseLimit) {
        if (n < 0) throw std::invalid_argument("AdjacencyMatrix: negative size");
        for (const auto& [i, j] : edges) {
            if (i < 0 || j < 0 || i >= n || j >= n)
                throw std::invalid_argument("AdjacencyMatrix: endpoint out of range");
            if (i == j) throw std::invalid_argument("AdjacencyMatrix: self-loop");
        }
        if (dense_) {
            words_per_row_ = static_cast<std::size_t>((n + 63) / 64);
            bits_.assign(static_cast<std::size_t>(n) * words_per_row_, 0);
            for (const auto& [i, j] : edges) {
                set_bit(i, j);
                set_bit(j, i);
            }
            std::int64_t m = 0;
            for (const std::uint64_t w : bits_) m += std::popcount(w);
            edge_count_ = m / 2;
        } else {
            std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
            for (const auto& [i, j] : edges) {
                adj[static_cast<std::size_t>(i)].push_back(j);
                adj[static_cast<std::size_t>(j)].push_back(i);
            }
            row_ptr_.resize(static_cast<std::size_t>(n) + 1, 0);
            for (int i = 0; i < n; ++i) {
                auto& nbrs = adj[static_cast<std::size_t>(i)];
                std::sort(nbrs.begin(), nbrs.end());
                row_ptr_[static_cast<std::size_t>(i) + 1] =
                    row_ptr_[static_cast<std::size_t>(i)] + static_cast<std::int64_t>(nbrs.size());
                col_idx_.insert(col_idx_.end(), nbrs.begin(), nbrs.end());
            }
            edge_count_ = static_cast<std::int64_t>(col_idx_.size()) / 2;
        }
    }

    int size() const noexcept { return n_; }
    std::int64_t edge_count() const noexcept { return edge_count_; }
    std::int64_t pair_count() const noexcept {
        return static_cast<std::int64_t>(n_) * (n_ - 1) / 2;
    }

    bool at(int i, int j) const {
        if (i == j) return false;
        if (dense_) {
            const std::uint64_t w =
                bits_[static_cast<std::size_t>(i) * words_per_row_ + static_cast<std::size_t>(j >> 6)];
            return (w >> (j & 63)) & 1u;
        }
        const auto lo = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i)];
        const auto hi = col_idx_.begin() + row_ptr_[static_cast<std::size_t>(i) + 1];
        return std::binary_search(lo, hi, j);
    }

    /// Apply f(j) over the neighbors of i, in increasing j.
    template <typename F>
    void for_each_neighbor(int i, F&& f) const {
        if (dense_) {
            const std::uint64_t* row = bits_.data() + static_cast<std::size_t>(i) * words_per_row_;
            for (std::size_t w = 0; w < words_per_row_; ++w) {
                std::uint64_t bitsw = row[w];
                while (bitsw) {
                    const int b = std::countr_zero(bitsw);
                    f(static_cast<int>(w * 64) + b);
                    bitsw &= bitsw - 1;
                }
            }
        } else {
            for (std::int64_t p = row_ptr_[static_cast<std::size_t>(i)];
                 p < row_ptr_[static_cast<std::size_t>(i) + 1]; ++p)
                f(col_idx_[static_cast<std::size_t>(p)]);
        }
    }

    /// Apply f(i, j) over the edges with i < j.
    template <typename F>
    void for_each_edge(F&& f) const {
        for (int i = 0; i < n_; ++i)
            for_each_neighbor(i, [&](int j) {
                if (i < j) f(i, j);
            });
    }

    /// A * x for a dense n-by-k matrix x; fixed left-to-right accumulation
    /// order per row, so the result is reproducible.
    Eigen::MatrixXd multiply(const Eigen::Ref<const Eigen::MatrixXd>& x) const {
        if (x.rows() != n_) throw std::invalid_argument("AdjacencyMatrix::multiply: row mismatch");
        Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, x.cols());
        for (int i = 0; i < n_; ++i) {
            auto row = out.row(i);
            for_each_neighbor(i, [&](int j) { row += x.row(j); });
        }
        return out;
    }

    Eigen::VectorXd degrees() const {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(n_);
        for (int i = 0; i < n_; ++i) {
            int deg = 0;
            for_each_neighbor(i, [&](int) { ++deg; });
            d[i] = deg;
        }
        return d;
    }

    Eigen::MatrixXd to_dense() const {
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
        for_each_edge([&](int i, int j) {
            m(i, j) = 1.0;
            m(j, i) = 1.0;
        });
        return m;
    }

    std::vector<std::pair<int, int>> edge_list() const {
        std::vector<std::pair<int, int>> edges;
        edges.reserve(static_cast<std::size_t>(edge_count_));
        for_each_edge([&](int i, int j) { edges.emplace_back(i, j); });
        return edges;
    }

    bool operator==(const AdjacencyMatrix& other) const {
        return n_ == other.n_ && edge_list() == other.edge_list();
    }

private:
    void set_bit(int i, int j) {
        bits_[static_cast<std::size_t>(i) * words_per_row_ + static_cast<std::size_t>(j >> 6)] |=
            std::uint64_t{1} << (j & 63);
    }

    int n_;
    bool dense_;
    std::int64_t edge_count_ = 0;
    // dense storage
    std::size_t words_per_row_ = 0;
    std::vector<std::uint64_t> bits_;
    // CSR storage
    std::vector<std::int64_t> row_ptr_;
    std::vector<int> col_idx_;
};

}  // namespace sbmf
