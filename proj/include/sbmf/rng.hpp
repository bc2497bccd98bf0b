#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include <Eigen/Core>

namespace sbmf {

/// Seedable, splittable random generator.
///
/// The core stream is std::mt19937_64, which is fully specified by the
/// standard, so sequences are identical across platforms. All variate
/// transformations (uniform, normal, gamma, beta, categorical) are
/// implemented here rather than via <random> distributions, whose output
/// is implementation-defined. split() derives an independent stream from
/// the parent seed through splitmix64 mixing.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(splitmix64(seed)) {}

    std::uint64_t seed() const noexcept { return seed_; }

    /// Child stream keyed by (parent seed, stream id).
    Rng split(std::uint64_t stream) const {
        return Rng(splitmix64(seed_ + 0x9e3779b97f4a7c15ULL * (stream + 1)));
    }

    /// Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t uniform_index(std::uint64_t n) {
        // rejection sampling on the top bits to avoid modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Standard normal via Box-Muller (two uniforms per draw, no cache).
    double normal() {
        double u1 = uniform();
        while (u1 == 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 boosted through
    /// Gamma(shape + 1) * U^{1/shape}.
    double gamma(double shape) {
        if (!(shape > 0.0)) throw std::invalid_argument("gamma: shape must be positive");
        if (shape < 1.0) {
            double u = uniform();
            while (u == 0.0) u = uniform();
            return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
        }
        const double d = shape - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            double u = uniform();
            while (u == 0.0) u = uniform();
            if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
        }
    }

    /// Beta(a, b) as the two-Gamma ratio X/(X+Y).
    double beta(double a, double b) {
        const double x = gamma(a);
        const double y = gamma(b);
        return x / (x + y);
    }

    /// Inverse-CDF categorical draw, exactly one uniform consumed.
    Eigen::Index categorical(const Eigen::Ref<const Eigen::VectorXd>& probs) {
        const double u = uniform();
        double acc = 0.0;
        for (Eigen::Index a = 0; a < probs.size(); ++a) {
            acc += probs[a];
            if (u < acc) return a;
        }
        return probs.size() - 1;  // guard against rounding in the partial sums
    }

private:
    static std::uint64_t splitmix64(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace sbmf
