#pragma once

#include <cmath>
#include <stdexcept>

#include <Eigen/Core>

#include "sbmf/special.hpp"

namespace sbmf {

/// Parameters of a Beta distribution; both must be strictly positive.
struct BetaParams {
    double alpha;
    double beta;

    BetaParams(double a, double b) : alpha(a), beta(b) {
        if (!(a > 0.0) || !(b > 0.0))
            throw std::invalid_argument("BetaParams: alpha and beta must be positive");
    }

    double mean() const { return alpha / (alpha + beta); }
};

/// KL(Categorical(p) || Categorical(q)) with the 0 log 0 = 0 convention.
/// Throws if q has a zero where p is positive.
inline double kl_categorical(const Eigen::Ref<const Eigen::VectorXd>& p,
                             const Eigen::Ref<const Eigen::VectorXd>& q) {
    if (p.size() != q.size())
        throw std::invalid_argument("kl_categorical: length mismatch");
    double kl = 0.0;
    for (Eigen::Index a = 0; a < p.size(); ++a) {
        if (p[a] == 0.0) continue;
        if (q[a] <= 0.0)
            throw std::domain_error("kl_categorical: divergence infinite (q zero on support of p)");
        kl += p[a] * std::log(p[a] / q[a]);
    }
    return kl;
}

/// KL(Beta(a) || Beta(b)) in closed form via log_gamma and digamma.
inline double kl_beta(const BetaParams& a, const BetaParams& b) {
    const double psi_sum = digamma(a.alpha + a.beta);
    return log_beta(b.alpha, b.beta) - log_beta(a.alpha, a.beta) +
           (a.alpha - b.alpha) * (digamma(a.alpha) - psi_sum) +
           (a.beta - b.beta) * (digamma(a.beta) - psi_sum);
}

}  // namespace sbmf
