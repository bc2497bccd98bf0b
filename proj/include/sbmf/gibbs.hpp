#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "sbmf/assignment.hpp"
#include "sbmf/graph.hpp"
#include "sbmf/rng.hpp"
#include "sbmf/variational.hpp"

namespace sbmf {

/// One sample of the batched Gibbs chain.
struct GibbsSample {
    HardAssignment z;
    double p;
    double q;
};

/// Batched Gibbs sampling. Each iteration refreshes the Beta parameters
/// from the previous hard assignment, draws (p, q), forms (t, lambda) by
/// the plug-in log-odds formulas, maps the previous assignment through h,
/// and redraws every row categorically. Rows are sampled sequentially in
/// index order, one uniform per row, so the chain is reproducible.
inline std::pair<std::vector<GibbsSample>, IterationTrace> gibbs(
    const AdjacencyMatrix& A, int k, const PriorConfig& priors, const HardAssignment& z0,
    int iterations, std::uint64_t seed,
    const std::optional<HardAssignment>& truth = std::nullopt) {
    if (iterations < 1) throw std::invalid_argument("gibbs: iterations must be >= 1");
    if (z0.communities() != k || z0.size() != A.size())
        throw std::invalid_argument("gibbs: dimension mismatch");
    const int n = A.size();
    Rng rng(seed);
    HardAssignment z = z0;
    std::vector<GibbsSample> chain;
    chain.reserve(static_cast<std::size_t>(iterations));
    IterationTrace trace;
    for (int s = 0; s < iterations; ++s) {
        const auto start = std::chrono::steady_clock::now();
        const Eigen::MatrixXd zmat = z.matrix();
        const auto [p_params, q_params] = update_beta_params(zmat, A, priors);
        const double p = rng.beta(p_params.alpha, p_params.beta);
        const double q = rng.beta(q_params.alpha, q_params.beta);
        if (p == q)
            throw DegenerateSeparationError("gibbs: drawn p == q", s);
        const double t = 0.5 * std::log(p * (1.0 - q) / ((1.0 - p) * q));
        const double lambda = std::log((1.0 - q) / (1.0 - p)) / (2.0 * t);
        const SoftAssignment pi = h_update(SoftAssignment(zmat), t, lambda, priors, A);
        std::vector<int> labels(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            labels[static_cast<std::size_t>(i)] =
                static_cast<int>(rng.categorical(pi.row(i).transpose()));
        z = HardAssignment(std::move(labels), k);
        const double millis =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
                .count();
        IterationRecord rec = detail::make_record(s, pi.matrix(), p_params, q_params, t, lambda,
                                                  priors, A, truth, millis);
        // loss of the drawn hard state; make_record reported the soft state
        if (truth) rec.misclustered = misclustered_count(z, *truth);
        rec.p_mean = p;
        rec.q_mean = q;
        trace.records.push_back(rec);
        chain.push_back(GibbsSample{z, p, q});
    }
    return {std::move(chain), std::move(trace)};
}

}  // namespace sbmf
