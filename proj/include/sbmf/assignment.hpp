#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

namespace sbmf {

/// One-hot membership matrix (the set of hard assignments); stored as
/// 0-based labels.
class HardAssignment {
public:
    HardAssignment(std::vector<int> labels, int k) : labels_(std::move(labels)), k_(k) {
        if (k < 1) throw std::invalid_argument("HardAssignment: k must be >= 1");
        for (const int z : labels_)
            if (z < 0 || z >= k) throw std::invalid_argument("HardAssignment: label out of range");
    }

    int size() const noexcept { return static_cast<int>(labels_.size()); }
    int communities() const noexcept { return k_; }
    int label(int i) const { return labels_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& labels() const noexcept { return labels_; }

    Eigen::MatrixXd matrix() const {
        Eigen::MatrixXd z = Eigen::MatrixXd::Zero(size(), k_);
        for (int i = 0; i < size(); ++i) z(i, labels_[static_cast<std::size_t>(i)]) = 1.0;
        return z;
    }

    std::vector<int> community_sizes() const {
        std::vector<int> sizes(static_cast<std::size_t>(k_), 0);
        for (const int z : labels_) ++sizes[static_cast<std::size_t>(z)];
        return sizes;
    }

    bool operator==(const HardAssignment& other) const {
        return k_ == other.k_ && labels_ == other.labels_;
    }

private:
    std::vector<int> labels_;
    int k_;
};

/// Row-stochastic membership matrix (the soft relaxation of the hard set).
class SoftAssignment {
public:
    static constexpr double kRowSumTol = 1e-12;

    explicit SoftAssignment(Eigen::MatrixXd rows) : rows_(std::move(rows)) {
        for (Eigen::Index i = 0; i < rows_.rows(); ++i) {
            double sum = 0.0;
            for (Eigen::Index a = 0; a < rows_.cols(); ++a) {
                const double v = rows_(i, a);
                if (!(v >= 0.0) || v > 1.0)
                    throw std::invalid_argument("SoftAssignment: entry outside [0,1]");
                sum += v;
            }
            if (std::abs(sum - 1.0) > kRowSumTol * rows_.cols())
                throw std::invalid_argument("SoftAssignment: row does not sum to 1");
        }
    }

    static SoftAssignment from_hard(const HardAssignment& z) { return SoftAssignment(z.matrix()); }

    int size() const noexcept { return static_cast<int>(rows_.rows()); }
    int communities() const noexcept { return static_cast<int>(rows_.cols()); }
    const Eigen::MatrixXd& matrix() const noexcept { return rows_; }
    Eigen::MatrixXd::ConstRowXpr row(int i) const { return rows_.row(i); }

private:
    Eigen::MatrixXd rows_;
};

/// Within/cross edge probabilities of an assortative block model.
struct BlockParams {
    double p;
    double q;
    int k;

    BlockParams(double p_, double q_, int k_) : p(p_), q(q_), k(k_) {
        if (k < 2) throw std::invalid_argument("BlockParams: k must be >= 2");
        if (!(q >= 0.0) || !(p <= 1.0) || !(q <= p))
            throw std::invalid_argument("BlockParams: need 0 <= q <= p <= 1");
    }
};

/// Per-node categorical prior on memberships plus Beta hyperparameters on
/// the edge probabilities.
class PriorConfig {
public:
    PriorConfig(Eigen::MatrixXd pi_pri, double alpha_p, double beta_p, double alpha_q,
                double beta_q)
        : pi_pri_(std::move(pi_pri)),
          alpha_p_(alpha_p),
          beta_p_(beta_p),
          alpha_q_(alpha_q),
          beta_q_(beta_q) {
        if (!(alpha_p > 0.0) || !(beta_p > 0.0) || !(alpha_q > 0.0) || !(beta_q > 0.0))
            throw std::invalid_argument("PriorConfig: Beta hyperparameters must be positive");
        if ((pi_pri_.array() <= 0.0).any())
            throw std::invalid_argument("PriorConfig: prior entries must be strictly positive");
        for (Eigen::Index i = 0; i < pi_pri_.rows(); ++i)
            if (std::abs(pi_pri_.row(i).sum() - 1.0) > SoftAssignment::kRowSumTol * pi_pri_.cols())
                throw std::invalid_argument("PriorConfig: prior row does not sum to 1");
    }

    /// Uniform categorical prior and the given Beta hyperparameters.
    static PriorConfig uniform(int n, int k, double alpha_p = 1.0, double beta_p = 1.0,
                               double alpha_q = 1.0, double beta_q = 1.0) {
        return PriorConfig(Eigen::MatrixXd::Constant(n, k, 1.0 / k), alpha_p, beta_p, alpha_q,
                           beta_q);
    }

    const Eigen::MatrixXd& pi_pri() const noexcept { return pi_pri_; }
    double alpha_p() const noexcept { return alpha_p_; }
    double beta_p() const noexcept { return beta_p_; }
    double alpha_q() const noexcept { return alpha_q_; }
    double beta_q() const noexcept { return beta_q_; }

    /// Largest prior odds ratio over communities within any node.
    double max_prior_odds() const {
        double w = 1.0;
        for (Eigen::Index i = 0; i < pi_pri_.rows(); ++i)
            w = std::max(w, pi_pri_.row(i).maxCoeff() / pi_pri_.row(i).minCoeff());
        return w;
    }

private:
    Eigen::MatrixXd pi_pri_;
    double alpha_p_, beta_p_, alpha_q_, beta_q_;
};

inline std::vector<int> labels_from_assignment(const HardAssignment& z) { return z.labels(); }

inline HardAssignment assignment_from_labels(std::vector<int> labels, int k) {
    return HardAssignment(std::move(labels), k);
}

/// Row-argmax hardening; ties broken at the smallest community index.
inline HardAssignment harden(const SoftAssignment& pi) {
    std::vector<int> labels(static_cast<std::size_t>(pi.size()));
    const Eigen::MatrixXd& m = pi.matrix();
    for (int i = 0; i < pi.size(); ++i) {
        int best = 0;
        for (int a = 1; a < pi.communities(); ++a)
            if (m(i, a) > m(i, best)) best = a;
        labels[static_cast<std::size_t>(i)] = best;
    }
    return HardAssignment(std::move(labels), pi.communities());
}

/// Minimum over community pairs of (n_a + n_b)/2.
inline double nbar_min(const HardAssignment& z) {
    const std::vector<int> sizes = z.community_sizes();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < sizes.size(); ++a)
        for (std::size_t b = a + 1; b < sizes.size(); ++b)
            best = std::min(best, 0.5 * (sizes[a] + sizes[b]));
    return best;
}

}  // namespace sbmf
