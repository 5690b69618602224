#ifndef NATCAT_HAZARD_HPP
#define NATCAT_HAZARD_HPP

#include <span>
#include <utility>
#include <vector>

namespace natcat::hazard {

// Annual PGA exceedance lambda(pga) = alpha/(beta-1) * pga^-(beta-1), with
// density alpha * pga^-beta supported on [pga_min, inf).
struct PowerLawHazard {
    double alpha = 0.0;
    double beta = 2.0;
    double pga_min = 0.0;

    static PowerLawHazard from_alpha_beta(double alpha, double beta);

    double density(double pga) const;              // zero below pga_min
    double exceedance(double pga) const;           // clamped to [0, 1]
    double quantile_from_exceedance(double lambda) const;   // inverse of exceedance
};

struct ExceedancePoint {
    double pga = 0.0;
    double probability = 0.0;
};

// Log-log OLS on the exceedance curve; slope gives -(beta-1), intercept
// log(alpha/(beta-1)).
PowerLawHazard fit_power_law(std::span<const ExceedancePoint> points);

// Density of amplification * PGA, renormalized by change of variables.
double pga_density(const PowerLawHazard& h, double pga, double amplification);

struct FloodFrequency {
    double nb_size = 1.0;
    double nb_prob = 0.5;               // mean = size * (1 - prob) / prob
    double mean_flooded_munis = 1.0;    // average municipalities hit per flood year
    int cluster_size = 1;

    double pmf(int k) const;
    double pmf_zero() const { return pmf(0); }
    double mean() const { return nb_size * (1.0 - nb_prob) / nb_prob; }
};

// P(N_F >= 1) for one municipality: (1 - f(0)) * ext_P3 * mean_flooded / cluster_size.
double prob_at_least_one_flood(const FloodFrequency& ff, double p3_extent);

// Negative binomial maximum likelihood on yearly counts; returns (size, prob).
std::pair<double, double> fit_flood_frequency(std::span<const int> counts);

struct DepthDistribution {
    double shape = 1.0;
    double rate = 1.0;    // depth in metres

    double pdf(double x) const;
    double cdf(double x) const;
    double mean() const { return shape / rate; }
};

struct GammaFitReport {
    DepthDistribution dist;
    double sse = 0.0;   // fitted density vs 50-bin empirical histogram
    double sae = 0.0;
};

GammaFitReport fit_depth_gamma(std::span<const double> depths);

} // namespace natcat::hazard

#endif
