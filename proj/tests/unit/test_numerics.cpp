#include <doctest.h>

#include <cmath>

#include "sbmf/divergence.hpp"
#include "sbmf/rng.hpp"
#include "sbmf/special.hpp"

using namespace sbmf;

namespace {

// Quadrature oracle for KL between Beta densities, independent of the
// closed form: substitute x = sin^2(theta) to remove the endpoint
// singularities, then composite Simpson on [0, pi/2].
double kl_beta_quadrature(const BetaParams& a, const BetaParams& b) {
    const double log_norm_a = log_beta(a.alpha, a.beta);
    const double log_norm_b = log_beta(b.alpha, b.beta);
    auto integrand = [&](double theta) {
        const double s = std::sin(theta);
        const double c = std::cos(theta);
        const double x = s * s;
        if (x <= 0.0 || x >= 1.0) return 0.0;
        const double log_fa =
            (a.alpha - 1.0) * std::log(x) + (a.beta - 1.0) * std::log1p(-x) - log_norm_a;
        const double log_fb =
            (b.alpha - 1.0) * std::log(x) + (b.beta - 1.0) * std::log1p(-x) - log_norm_b;
        return std::exp(log_fa) * (log_fa - log_fb) * 2.0 * s * c;
    };
    const int intervals = 20000;
    const double h = (std::asin(1.0)) / intervals;  // pi/2 split
    double sum = integrand(0.0) + integrand(intervals * h);
    for (int i = 1; i < intervals; ++i) sum += integrand(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

}  // namespace

TEST_CASE("digamma reference values") {
    CHECK(digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-12));
    CHECK(digamma(0.5) == doctest::Approx(-1.9635100260214235).epsilon(1e-12));
}

TEST_CASE("digamma recurrence psi(x+1) - psi(x) = 1/x") {
    Rng rng(17);
    for (int i = 0; i < 200; ++i) {
        const double x = std::pow(10.0, -3.0 + 9.0 * rng.uniform());  // [1e-3, 1e6]
        CHECK(digamma(x + 1.0) - digamma(x) == doctest::Approx(1.0 / x).epsilon(1e-10));
    }
}

TEST_CASE("digamma bracket: psi(x) in (log(x - 1/2), log x) for x > 1/2") {
    for (double x = 0.6; x < 1e5; x *= 1.37) {
        CHECK(digamma(x) > std::log(x - 0.5));
        CHECK(digamma(x) < std::log(x));
    }
}

TEST_CASE("digamma domain") {
    CHECK_THROWS_AS(digamma(0.0), std::domain_error);
    CHECK_THROWS_AS(digamma(-1.0), std::domain_error);
}

TEST_CASE("log_gamma values and recurrence") {
    CHECK(log_gamma(1.0) == doctest::Approx(0.0));
    CHECK(log_gamma(0.5) == doctest::Approx(0.5723649429247001).epsilon(1e-12));
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
        const double x = 0.1 + 100.0 * rng.uniform();
        CHECK(log_gamma(x + 1.0) - log_gamma(x) == doctest::Approx(std::log(x)).epsilon(1e-11));
    }
    CHECK_THROWS_AS(log_gamma(0.0), std::domain_error);
}

TEST_CASE("kl_categorical") {
    Eigen::VectorXd half(2), point(2), other(2);
    half << 0.5, 0.5;
    point << 1.0, 0.0;
    SUBCASE("identical arguments give exactly zero") {
        CHECK(kl_categorical(half, half) == 0.0);
    }
    SUBCASE("point mass vs uniform is log 2") {
        CHECK(kl_categorical(point, half) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    }
    SUBCASE("support violation throws") {
        CHECK_THROWS_AS(kl_categorical(half, point), std::domain_error);
    }
    SUBCASE("zero entries in p contribute nothing") {
        other << 0.3, 0.7;
        CHECK(kl_categorical(point, other) == doctest::Approx(-std::log(0.3)));
    }
}

TEST_CASE("kl_beta") {
    SUBCASE("identical arguments give exactly zero") {
        CHECK(kl_beta(BetaParams(2, 3), BetaParams(2, 3)) == 0.0);
    }
    SUBCASE("Beta(2,1) vs Beta(1,1) is log 2 - 1/2") {
        CHECK(kl_beta(BetaParams(2, 1), BetaParams(1, 1)) ==
              doctest::Approx(std::log(2.0) - 0.5).epsilon(1e-12));
    }
    SUBCASE("nonnegative and matches quadrature on a random grid") {
        Rng rng(5);
        for (int i = 0; i < 25; ++i) {
            const BetaParams a(0.5 + 49.5 * rng.uniform(), 0.5 + 49.5 * rng.uniform());
            const BetaParams b(0.5 + 49.5 * rng.uniform(), 0.5 + 49.5 * rng.uniform());
            const double closed = kl_beta(a, b);
            CHECK(closed >= 0.0);
            CHECK(std::abs(closed - kl_beta_quadrature(a, b)) < 1e-6);
        }
    }
}
