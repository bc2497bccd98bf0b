#pragma once

#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "sbmf/assignment.hpp"
#include "sbmf/divergence.hpp"
#include "sbmf/errors.hpp"
#include "sbmf/graph.hpp"
#include "sbmf/loss.hpp"
#include "sbmf/special.hpp"

namespace sbmf {

enum class Variant { digamma, log };

/// Edge and pair mass split into within/cross community parts under a soft
/// assignment. Sums over unordered node pairs i < j.
struct PairStats {
    double within_edges;
    double within_pairs;
    double cross_edges;
    double cross_pairs;
};

inline PairStats pair_stats(const Eigen::MatrixXd& pi, const AdjacencyMatrix& A) {
    if (pi.rows() != A.size()) throw std::invalid_argument("pair_stats: dimension mismatch");
    const Eigen::MatrixXd S = A.multiply(pi);
    const double within_edges = 0.5 * (pi.array() * S.array()).sum();
    const Eigen::RowVectorXd colsum = pi.colwise().sum();
    const double within_pairs = 0.5 * (colsum.squaredNorm() - pi.squaredNorm());
    const double edges = static_cast<double>(A.edge_count());
    const double pairs = static_cast<double>(A.pair_count());
    return {within_edges, within_pairs, edges - within_edges, pairs - within_pairs};
}

/// Conjugate Beta updates from the current soft assignment:
/// alpha_p = alpha_p^pri + sum_{i<j} sum_a pi_ia pi_ja A_ij, etc.
inline std::pair<BetaParams, BetaParams> update_beta_params(const Eigen::MatrixXd& pi,
                                                            const AdjacencyMatrix& A,
                                                            const PriorConfig& priors) {
    const PairStats s = pair_stats(pi, A);
    return {BetaParams(priors.alpha_p() + s.within_edges, priors.beta_p() + s.within_pairs - s.within_edges),
            BetaParams(priors.alpha_q() + s.cross_edges, priors.beta_q() + s.cross_pairs - s.cross_edges)};
}

inline std::pair<double, double> t_lambda_digamma(const BetaParams& p, const BetaParams& q) {
    const double t = 0.5 * ((digamma(p.alpha) - digamma(p.beta)) -
                            (digamma(q.alpha) - digamma(q.beta)));
    if (t == 0.0)
        throw DegenerateSeparationError("t_lambda_digamma: t == 0, lambda undefined");
    const double lambda = ((digamma(q.beta) - digamma(q.alpha + q.beta)) -
                           (digamma(p.beta) - digamma(p.alpha + p.beta))) /
                          (2.0 * t);
    return {t, lambda};
}

inline std::pair<double, double> t_lambda_log(const BetaParams& p, const BetaParams& q) {
    const double t = 0.5 * std::log(p.alpha * q.beta / (p.beta * q.alpha));
    if (t == 0.0) throw DegenerateSeparationError("t_lambda_log: t == 0, lambda undefined");
    const double lambda =
        std::log(q.beta * (p.alpha + p.beta) / ((q.alpha + q.beta) * p.beta)) / (2.0 * t);
    return {t, lambda};
}

/// Batch assignment map: row i, entry a proportional to
/// pri(i,a) * exp[2t sum_{j != i} pi(j,a) (A_ij - lambda)].
/// Computed in log space with row-max subtraction.
inline SoftAssignment h_update(const SoftAssignment& pi, double t, double lambda,
                               const PriorConfig& priors, const AdjacencyMatrix& A) {
    const Eigen::MatrixXd& cur = pi.matrix();
    if (cur.rows() != A.size() || priors.pi_pri().rows() != cur.rows() ||
        priors.pi_pri().cols() != cur.cols())
        throw std::invalid_argument("h_update: dimension mismatch");
    const Eigen::MatrixXd S = A.multiply(cur);
    const Eigen::RowVectorXd colsum = cur.colwise().sum();
    Eigen::MatrixXd logits =
        priors.pi_pri().array().log().matrix() +
        2.0 * t * (S - lambda * (colsum.replicate(cur.rows(), 1) - cur));
    Eigen::MatrixXd out(cur.rows(), cur.cols());
    for (Eigen::Index i = 0; i < cur.rows(); ++i) {
        const double mx = logits.row(i).maxCoeff();
        if (!std::isfinite(mx))
            throw std::runtime_error("h_update: non-finite logit");
        out.row(i) = (logits.row(i).array() - mx).exp();
        out.row(i) /= out.row(i).sum();
    }
    return SoftAssignment(std::move(out));
}

/// Mean field factor parameters after an update step.
struct VariationalState {
    SoftAssignment pi;
    BetaParams p_params;
    BetaParams q_params;
    double t;
    double lambda;
};

/// Per-iteration experiment record. loss / misclustered are NaN / -1 when
/// the truth is unknown. Wall-clock time never enters serialized traces.
struct IterationRecord {
    int iteration;
    double loss;
    int misclustered;
    double elbo;
    double t;
    double lambda;
    double p_mean;
    double q_mean;
    double millis;
    bool non_assortative;
};

struct IterationTrace {
    std::vector<IterationRecord> records;
    /// ELBO after every coordinate block (sequential CAVI only).
    std::vector<double> elbo_checkpoints;
};

/// Mean field objective, assembled with the digamma-based expectations:
/// E_q[log p(A|Z,p,q)] - KL(q(Z)||prior) - KL(q(p)||prior) - KL(q(q)||prior).
/// Higher is better; equals log p(A) - KL(q||posterior) up to log p(A).
inline double elbo(const Eigen::MatrixXd& pi, const BetaParams& p, const BetaParams& q,
                   const PriorConfig& priors, const AdjacencyMatrix& A) {
    const PairStats s = pair_stats(pi, A);
    const double ep_lor = digamma(p.alpha) - digamma(p.beta);
    const double ep_1m = digamma(p.beta) - digamma(p.alpha + p.beta);
    const double eq_lor = digamma(q.alpha) - digamma(q.beta);
    const double eq_1m = digamma(q.beta) - digamma(q.alpha + q.beta);
    double value = s.within_edges * ep_lor + s.within_pairs * ep_1m +
                   s.cross_edges * eq_lor + s.cross_pairs * eq_1m;
    for (Eigen::Index i = 0; i < pi.rows(); ++i)
        value -= kl_categorical(pi.row(i).transpose(), priors.pi_pri().row(i).transpose());
    value -= kl_beta(p, BetaParams(priors.alpha_p(), priors.beta_p()));
    value -= kl_beta(q, BetaParams(priors.alpha_q(), priors.beta_q()));
    return value;
}

inline double elbo(const VariationalState& state, const PriorConfig& priors,
                   const AdjacencyMatrix& A) {
    return elbo(state.pi.matrix(), state.p_params, state.q_params, priors, A);
}

/// Default iteration budget: ceil(log n).
inline int default_iterations(int n) {
    return std::max(1, static_cast<int>(std::ceil(std::log(static_cast<double>(n)))));
}

namespace detail {

inline IterationRecord make_record(int iteration, const Eigen::MatrixXd& pi,
                                   const BetaParams& p, const BetaParams& q, double t,
                                   double lambda, const PriorConfig& priors,
                                   const AdjacencyMatrix& A,
                                   const std::optional<HardAssignment>& truth, double millis) {
    IterationRecord rec{};
    rec.iteration = iteration;
    rec.loss = std::numeric_limits<double>::quiet_NaN();
    rec.misclustered = -1;
    if (truth) {
        rec.loss = l1_loss(pi, truth->matrix()).loss;
        rec.misclustered = misclustered_count(harden(SoftAssignment(pi)), *truth);
    }
    rec.elbo = elbo(pi, p, q, priors, A);
    rec.t = t;
    rec.lambda = lambda;
    rec.p_mean = p.mean();
    rec.q_mean = q.mean();
    rec.millis = millis;
    rec.non_assortative = t < 0.0;
    return rec;
}

}  // namespace detail

/// Batch coordinate ascent: alternates the Beta updates, the (t, lambda)
/// pair of the chosen variant, and the batch map h until the iteration
/// budget is spent. ELBO in the trace is always the digamma-based
/// objective, regardless of the variant driving the updates.
inline std::pair<VariationalState, IterationTrace> bcavi(
    const AdjacencyMatrix& A, int k, const PriorConfig& priors, const SoftAssignment& pi0,
    int iterations, Variant variant = Variant::digamma,
    const std::optional<HardAssignment>& truth = std::nullopt) {
    if (iterations < 1) throw std::invalid_argument("bcavi: iterations must be >= 1");
    if (pi0.communities() != k || pi0.size() != A.size())
        throw std::invalid_argument("bcavi: dimension mismatch");
    SoftAssignment pi = pi0;
    IterationTrace trace;
    BetaParams p(priors.alpha_p(), priors.beta_p());
    BetaParams q(priors.alpha_q(), priors.beta_q());
    double t = 0.0, lambda = 0.0;
    for (int s = 0; s < iterations; ++s) {
        const auto start = std::chrono::steady_clock::now();
        std::tie(p, q) = update_beta_params(pi.matrix(), A, priors);
        if (A.pair_count() == 0) {
            // no data: the exact coordinate optimum is the prior itself
            pi = SoftAssignment(priors.pi_pri());
            t = 0.0;
            lambda = 0.0;
        } else {
            try {
                std::tie(t, lambda) =
                    variant == Variant::digamma ? t_lambda_digamma(p, q) : t_lambda_log(p, q);
            } catch (const DegenerateSeparationError& e) {
                throw DegenerateSeparationError(e.what(), s);
            }
            pi = h_update(pi, t, lambda, priors, A);
        }
        const double millis =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        trace.records.push_back(
            detail::make_record(s, pi.matrix(), p, q, t, lambda, priors, A, truth, millis));
    }
    return {VariationalState{pi, p, q, t, lambda}, std::move(trace)};
}

/// Sequential CAVI: within each sweep, update q(p), then q(q), then each
/// assignment row in index order with the freshest values. The ELBO is
/// recorded after every coordinate block in elbo_checkpoints.
inline std::pair<VariationalState, IterationTrace> cavi_sequential(
    const AdjacencyMatrix& A, int k, const PriorConfig& priors, const SoftAssignment& pi0,
    int sweeps, const std::optional<HardAssignment>& truth = std::nullopt) {
    if (sweeps < 1) throw std::invalid_argument("cavi_sequential: sweeps must be >= 1");
    if (pi0.communities() != k || pi0.size() != A.size())
        throw std::invalid_argument("cavi_sequential: dimension mismatch");
    const int n = A.size();
    Eigen::MatrixXd pi = pi0.matrix();
    IterationTrace trace;
    BetaParams p(priors.alpha_p(), priors.beta_p());
    BetaParams q(priors.alpha_q(), priors.beta_q());
    double t = 0.0, lambda = 0.0;
    trace.elbo_checkpoints.push_back(elbo(pi, p, q, priors, A));
    for (int s = 0; s < sweeps; ++s) {
        const auto start = std::chrono::steady_clock::now();
        if (A.pair_count() == 0) {
            pi = priors.pi_pri();
            trace.elbo_checkpoints.push_back(elbo(pi, p, q, priors, A));
        } else {
            const auto [p_new, q_new] = update_beta_params(pi, A, priors);
            p = p_new;
            trace.elbo_checkpoints.push_back(elbo(pi, p, q, priors, A));
            q = q_new;
            trace.elbo_checkpoints.push_back(elbo(pi, p, q, priors, A));
            try {
                std::tie(t, lambda) = t_lambda_digamma(p, q);
            } catch (const DegenerateSeparationError& e) {
                throw DegenerateSeparationError(e.what(), s);
            }
            Eigen::RowVectorXd colsum = pi.colwise().sum();
            for (int i = 0; i < n; ++i) {
                Eigen::RowVectorXd neigh = Eigen::RowVectorXd::Zero(k);
                A.for_each_neighbor(i, [&](int j) { neigh += pi.row(j); });
                Eigen::RowVectorXd logits =
                    priors.pi_pri().row(i).array().log().matrix() +
                    2.0 * t * (neigh - lambda * (colsum - pi.row(i)));
                const double mx = logits.maxCoeff();
                if (!std::isfinite(mx)) throw std::runtime_error("cavi: non-finite logit");
                Eigen::RowVectorXd row = (logits.array() - mx).exp();
                row /= row.sum();
                colsum += row - pi.row(i);
                pi.row(i) = row;
                trace.elbo_checkpoints.push_back(elbo(pi, p, q, priors, A));
            }
        }
        const double millis =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        trace.records.push_back(
            detail::make_record(s, pi, p, q, t, lambda, priors, A, truth, millis));
    }
    return {VariationalState{SoftAssignment(pi), p, q, t, lambda}, std::move(trace)};
}

}  // namespace sbmf
