#include <doctest.h>

#include "natcat/errors.hpp"
#include "natcat/num.hpp"
#include "natcat/rng.hpp"

#include <cmath>

using namespace natcat;

TEST_CASE("normal cdf reference values") {
    CHECK(num::normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(num::normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-12));
    CHECK(num::normal_cdf(-1.0) == doctest::Approx(0.15865525393145707).epsilon(1e-12));
    CHECK(num::normal_cdf(5.0) == doctest::Approx(0.9999997133484281).epsilon(1e-12));
}

TEST_CASE("digamma and trigamma reference values") {
    // digamma(1) = -EulerGamma, trigamma(1) = pi^2/6
    CHECK(num::digamma(1.0) == doctest::Approx(-0.5772156649015329).epsilon(1e-12));
    CHECK(num::digamma(10.5) == doctest::Approx(2.3030010342976865).epsilon(1e-12));
    CHECK(num::trigamma(1.0) == doctest::Approx(1.6449340668482264).epsilon(1e-12));
}

TEST_CASE("regularized incomplete gamma") {
    // P(1, x) = 1 - exp(-x)
    for (double x : {0.1, 1.0, 3.5, 10.0})
        CHECK(num::gamma_p(1.0, x) == doctest::Approx(1.0 - std::exp(-x)).epsilon(1e-12));
    // P(2, x) = 1 - (1 + x) exp(-x)
    CHECK(num::gamma_p(2.0, 1.5) ==
          doctest::Approx(1.0 - 2.5 * std::exp(-1.5)).epsilon(1e-12));
    CHECK(num::gamma_p(3.0, 0.0) == 0.0);
}

TEST_CASE("adaptive quadrature on analytic integrals") {
    auto r1 = num::integrate([](double x) { return x * x; }, 0.0, 1.0);
    CHECK(r1.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    auto r2 = num::integrate([](double x) { return std::exp(-x); }, 0.0, 20.0);
    CHECK(r2.value == doctest::Approx(1.0 - std::exp(-20.0)).epsilon(1e-10));
    // Kink inside the domain still converges via adaptive splitting.
    auto r3 = num::integrate([](double x) { return std::fabs(x - 0.3); }, 0.0, 1.0);
    CHECK(r3.value == doctest::Approx(0.5 * 0.09 + 0.5 * 0.49).epsilon(1e-9));
}

TEST_CASE("bisection solves monotone roots") {
    auto res = num::bisect([](double x) { return x * x - 2.0; }, 0.0, 2.0, 1e-12);
    CHECK(res.converged);
    CHECK(res.root == doctest::Approx(std::sqrt(2.0)).epsilon(1e-10));
    auto none = num::bisect([](double x) { return x + 10.0; }, 0.0, 1.0, 1e-12);
    CHECK_FALSE(none.converged);
}

TEST_CASE("mean and coefficient of variation") {
    auto mc = num::mean_cov({8.0, 12.0});
    CHECK(mc.mean == doctest::Approx(10.0));
    CHECK(mc.cov == doctest::Approx(0.2));   // population stddev 2 over mean 10
    CHECK(num::mean_cov({5.0, 5.0, 5.0}).cov == 0.0);
    CHECK(num::mean_cov({0.0, 0.0}).cov == 0.0);
}

TEST_CASE("counter rng is stateless in the draw coordinates") {
    rng::CounterRng a(42), b(42), c(43);
    CHECK(a.u01(3, 7) == b.u01(3, 7));
    CHECK(a.u01(3, 7) != c.u01(3, 7));
    CHECK(a.u01(3, 7) != a.u01(7, 3));
    double sum = 0.0;
    for (int i = 0; i < 10000; ++i) sum += a.u01(0, i);
    CHECK(sum / 10000.0 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("stream rng samplers match their moments") {
    rng::StreamRng r(7, 1);
    const int n = 200000;
    double sum = 0.0, sumsq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double g = r.gamma(2.0, 1.0);
        sum += g;
        sumsq += g * g;
    }
    CHECK(sum / n == doctest::Approx(2.0).epsilon(0.02));
    CHECK(sumsq / n - (sum / n) * (sum / n) == doctest::Approx(2.0).epsilon(0.05));

    rng::StreamRng r2(7, 2);
    double psum = 0.0;
    for (int i = 0; i < n; ++i) psum += static_cast<double>(r2.poisson(11.95));
    CHECK(psum / n == doctest::Approx(11.95).epsilon(0.02));

    rng::StreamRng r3(7, 3);
    double nbsum = 0.0;
    for (int i = 0; i < n; ++i) nbsum += static_cast<double>(r3.negative_binomial(5.0, 0.3));
    CHECK(nbsum / n == doctest::Approx(5.0 * 0.7 / 0.3).epsilon(0.02));
}
