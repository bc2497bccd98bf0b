#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "sbmf/errors.hpp"

namespace sbmf {

/// Order-1/2 Renyi divergence between Ber(p) and Ber(q):
/// I = -2 log[sqrt(pq) + sqrt((1-p)(1-q))]. Symmetric in (p, q).
inline double renyi_I(double p, double q) {
    if (!(p > 0.0) || !(p < 1.0) || !(q > 0.0) || !(q < 1.0))
        throw std::domain_error("renyi_I: arguments must lie in (0,1)");
    return -2.0 * std::log(std::sqrt(p * q) + std::sqrt((1.0 - p) * (1.0 - q)));
}

/// Population separation parameters:
/// t* = (1/2) log[p(1-q)/(q(1-p))], lambda* = (1/(2 t*)) log[(1-q)/(1-p)].
inline std::pair<double, double> t_lambda_star(double p, double q) {
    if (!(q > 0.0) || !(q < p) || !(p < 1.0))
        throw std::domain_error("t_lambda_star: need 0 < q < p < 1");
    const double t = 0.5 * std::log(p * (1.0 - q) / (q * (1.0 - p)));
    const double lambda = std::log((1.0 - q) / (1.0 - p)) / (2.0 * t);
    return {t, lambda};
}

/// Reference minimax curve with the vanishing correction set to zero:
/// n exp(-rho n I / k) for k >= 3, n exp(-n I / 2) for k = 2.
inline double minimax_bound(int n, int k, double rho, double I) {
    if (n < 1 || k < 2) throw std::invalid_argument("minimax_bound: invalid n or k");
    if (!(I >= 0.0)) throw std::invalid_argument("minimax_bound: I must be nonnegative");
    const double exponent = (k == 2) ? n * I / 2.0 : rho * n * I / k;
    return n * std::exp(-exponent);
}

/// Contraction coefficient c_n and iteration budget s0.
/// Requires the signal ratio nI/[w k (n/nbar_min)^2] to exceed 1.
inline std::pair<double, double> contraction_and_budget(int n, int k, double I, double w,
                                                        double nbar_min) {
    const double ratio = n * I / (w * k * (n / nbar_min) * (n / nbar_min));
    if (!(ratio > 1.0))
        throw RegimeError("contraction_and_budget: signal ratio nI/[wk(n/nbar_min)^2] <= 1");
    const double c_n = 1.0 / std::sqrt(ratio);
    const double s0 = (n * I / k) / std::log(ratio);
    return {c_n, s0};
}

/// Max residual of the two moment identities at (t*, lambda*):
/// e^{t lambda} = (E e^{tX} / E e^{-tY})^{1/2} and
/// E e^{tX} E e^{-tY} = e^{-I}, with X ~ Ber(q), Y ~ Ber(p).
inline double chernoff_identity_check(double p, double q) {
    const auto [t, lambda] = t_lambda_star(p, q);
    const double I = renyi_I(p, q);
    const double mgf_x = q * std::exp(t) + (1.0 - q);
    const double mgf_y = p * std::exp(-t) + (1.0 - p);
    const double r1 = std::abs(std::exp(t * lambda) - std::sqrt(mgf_x / mgf_y));
    const double r2 = std::abs(mgf_x * mgf_y - std::exp(-I));
    return std::max(r1, r2);
}

/// Bundle of the closed-form diagnostics for one experiment regime.
struct RateReport {
    double I;
    double t_star;
    double lambda_star;
    double nbar_min;
    double w;
    double minimax;
    double c_n;
    double s0;
};

inline RateReport rate_report(int n, int k, double p, double q, double w, double nbar_min_value,
                              double rho) {
    const double I = renyi_I(p, q);
    const auto [t, lambda] = t_lambda_star(p, q);
    const auto [c_n, s0] = contraction_and_budget(n, k, I, w, nbar_min_value);
    return {I, t, lambda, nbar_min_value, w, minimax_bound(n, k, rho, I), c_n, s0};
}

}  // namespace sbmf
