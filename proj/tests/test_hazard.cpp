#include <doctest.h>

#include "natcat/errors.hpp"
#include "natcat/hazard.hpp"
#include "natcat/num.hpp"
#include "natcat/rng.hpp"

#include <cmath>
#include <vector>

using namespace natcat;

namespace {

// Independent negative-binomial pmf oracle (size r, prob p).
double nb_pmf_oracle(int k, double r, double p) {
    return std::exp(std::lgamma(k + r) - std::lgamma(r) - std::lgamma(k + 1.0)) *
           std::pow(p, r) * std::pow(1.0 - p, k);
}

} // namespace

TEST_CASE("power law fit recovers a noiseless generator exactly") {
    // lambda(pga) = 0.01 pga^-1.5 corresponds to alpha = 0.015, beta = 2.5.
    std::vector<hazard::ExceedancePoint> pts;
    for (int i = 0; i < 9; ++i) {
        const double pga = 0.05 * std::pow(30.0, i / 8.0);
        pts.push_back({pga, 0.01 * std::pow(pga, -1.5)});
    }
    const auto h = hazard::fit_power_law(pts);
    CHECK(h.alpha == doctest::Approx(0.015).epsilon(1e-9));
    CHECK(h.beta == doctest::Approx(2.5).epsilon(1e-9));

    CHECK_THROWS_AS(hazard::fit_power_law(std::vector<hazard::ExceedancePoint>{
                        {0.1, 0.5}, {0.2, 0.4}}),
                    FitError);
    // Increasing exceedance implies beta <= 1.
    CHECK_THROWS_AS(hazard::fit_power_law(std::vector<hazard::ExceedancePoint>{
                        {0.1, 0.001}, {0.2, 0.01}, {0.4, 0.1}}),
                    FitError);
}

TEST_CASE("pga_min closed form") {
    const auto h = hazard::PowerLawHazard::from_alpha_beta(0.001, 2.0);
    CHECK(h.pga_min == doctest::Approx(0.001).epsilon(1e-12));
    CHECK_THROWS_AS(hazard::PowerLawHazard::from_alpha_beta(0.01, 1.0), FitError);
}

TEST_CASE("fitted density integrates to one") {
    const auto h = hazard::PowerLawHazard::from_alpha_beta(0.015, 2.5);
    // Body by quadrature plus the analytic tail above A.
    const double a = 50.0;
    const double body =
        num::integrate([&](double x) { return h.density(x); }, h.pga_min, a, 1e-12).value;
    const double tail = h.alpha / (h.beta - 1.0) * std::pow(a, -(h.beta - 1.0));
    CHECK(body + tail == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("amplified density") {
    const auto h = hazard::PowerLawHazard::from_alpha_beta(0.015, 2.5);
    CHECK(hazard::pga_density(h, h.pga_min, 1.0) ==
          doctest::Approx(h.alpha * std::pow(h.pga_min, -h.beta)).epsilon(1e-12));
    CHECK(hazard::pga_density(h, 0.5 * h.pga_min, 1.0) == 0.0);
    CHECK_THROWS_AS(hazard::pga_density(h, 0.1, 0.0), InputError);

    // With amplification 2 the density still integrates to one.
    const double amp = 2.0, a = 120.0;
    const double body = num::integrate([&](double x) { return hazard::pga_density(h, x, amp); },
                                       amp * h.pga_min, a, 1e-12)
                            .value;
    const double tail = h.exceedance(a / amp);
    CHECK(body + tail == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("probability of at least one flood") {
    hazard::FloodFrequency ff;
    // pmf(0) = prob^size; size 1, prob 0.5 gives 0.5.
    ff.nb_size = 1.0;
    ff.nb_prob = 0.5;
    ff.mean_flooded_munis = 10.0;
    ff.cluster_size = 100;
    CHECK(ff.pmf_zero() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(hazard::prob_at_least_one_flood(ff, 0.2) == doctest::Approx(0.01).epsilon(1e-12));
    CHECK(hazard::prob_at_least_one_flood(ff, 0.0) == 0.0);
    CHECK_THROWS_AS(hazard::prob_at_least_one_flood(ff, 1.5), InputError);

    ff.nb_size = 1.0;
    ff.nb_prob = 0.9;
    ff.mean_flooded_munis = 5.0;
    ff.cluster_size = 100;
    CHECK(ff.pmf_zero() == doctest::Approx(nb_pmf_oracle(0, 1.0, 0.9)).epsilon(1e-12));
    CHECK(hazard::prob_at_least_one_flood(ff, 1.0) == doctest::Approx(0.005).epsilon(1e-12));

    // Monotone in the surface extent and in 1 - f(0).
    double prev = -1.0;
    for (double ext : {0.0, 0.2, 0.5, 0.9}) {
        const double p = hazard::prob_at_least_one_flood(ff, ext);
        CHECK(p >= prev);
        prev = p;
    }
    // Full pmf cross-check against the oracle.
    hazard::FloodFrequency g{5.0, 0.3, 1.0, 1};
    for (int k : {0, 1, 2, 5, 20})
        CHECK(g.pmf(k) == doctest::Approx(nb_pmf_oracle(k, 5.0, 0.3)).epsilon(1e-12));
}

TEST_CASE("negative binomial mle") {
    rng::StreamRng r(2024, 0);
    std::vector<int> sample;
    for (int i = 0; i < 10000; ++i)
        sample.push_back(static_cast<int>(r.negative_binomial(5.0, 0.3)));
    const auto [size, prob] = hazard::fit_flood_frequency(sample);
    CHECK(size == doctest::Approx(5.0).epsilon(0.05));
    CHECK(prob == doctest::Approx(0.3).epsilon(0.05));
    double mean = 0.0;
    for (int y : sample) mean += y;
    mean /= sample.size();
    CHECK(size * (1.0 - prob) / prob == doctest::Approx(mean).epsilon(0.01));

    // Poisson-like data hits the boundary: size large, mean preserved.
    rng::StreamRng rp(2024, 1);
    std::vector<int> plike;
    for (int i = 0; i < 5000; ++i) plike.push_back(static_cast<int>(rp.poisson(7.0)));
    const auto [psize, pprob] = hazard::fit_flood_frequency(plike);
    double pmean = 0.0;
    for (int y : plike) pmean += y;
    pmean /= plike.size();
    CHECK(psize * (1.0 - pprob) / pprob == doctest::Approx(pmean).epsilon(0.01));
    CHECK(psize > 50.0);

    CHECK_THROWS_AS(hazard::fit_flood_frequency(std::vector<int>(20, 0)), FitError);
    CHECK_THROWS_AS(hazard::fit_flood_frequency(std::vector<int>{1, 2, 3}), FitError);

    // Cluster-like target: the reported mean count drives the synthetic data.
    rng::StreamRng rc(2024, 2);
    std::vector<int> cluster;
    for (int i = 0; i < 4000; ++i)
        cluster.push_back(static_cast<int>(rc.negative_binomial(5.0, 5.0 / (5.0 + 11.95))));
    const auto [csize, cprob] = hazard::fit_flood_frequency(cluster);
    double cmean = 0.0;
    for (int y : cluster) cmean += y;
    cmean /= cluster.size();
    CHECK(csize * (1.0 - cprob) / cprob == doctest::Approx(cmean).epsilon(0.01));
    CHECK(cmean == doctest::Approx(11.95).epsilon(0.05));
}

TEST_CASE("gamma depth mle") {
    rng::StreamRng r(99, 0);
    std::vector<double> depths;
    for (int i = 0; i < 10000; ++i) depths.push_back(r.gamma(2.0, 1.0));
    const auto fit = hazard::fit_depth_gamma(depths);
    CHECK(fit.dist.shape == doctest::Approx(2.0).epsilon(0.05));
    CHECK(fit.dist.rate == doctest::Approx(1.0).epsilon(0.05));
    CHECK(fit.dist.cdf(1e9) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.dist.cdf(0.0) == 0.0);
    CHECK(fit.sse >= 0.0);
    CHECK(fit.sae >= 0.0);
    CHECK(std::isfinite(fit.sse));
    CHECK(std::isfinite(fit.sae));

    CHECK_THROWS_AS(hazard::fit_depth_gamma(std::vector<double>{1, 2, -1, 4, 5, 6, 7, 8, 9, 10}),
                    InputError);
    CHECK_THROWS_AS(hazard::fit_depth_gamma(std::vector<double>{1, 2, 3}), FitError);

    // Density normalization via the cdf at a far quantile.
    const double far = fit.dist.mean() * 50.0;
    const double mass = num::integrate([&](double x) { return fit.dist.pdf(x); }, 0.0, far,
                                       1e-10)
                            .value;
    CHECK(mass + (1.0 - fit.dist.cdf(far)) == doctest::Approx(1.0).epsilon(1e-6));
}
