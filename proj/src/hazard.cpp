#include "natcat/hazard.hpp"
#include "natcat/errors.hpp"
#include "natcat/num.hpp"

#include <algorithm>
#include <cmath>

namespace natcat::hazard {

PowerLawHazard PowerLawHazard::from_alpha_beta(double alpha, double beta) {
    if (alpha <= 0.0) throw FitError("power law: alpha must be positive");
    if (beta <= 1.0) throw FitError("power law: beta <= 1 gives a non-integrable tail");
    PowerLawHazard h;
    h.alpha = alpha;
    h.beta = beta;
    h.pga_min = std::exp(std::log(alpha / (beta - 1.0)) / (beta - 1.0));
    return h;
}

double PowerLawHazard::density(double pga) const {
    if (pga < pga_min) return 0.0;
    return alpha * std::pow(pga, -beta);
}

double PowerLawHazard::exceedance(double pga) const {
    if (pga <= pga_min) return 1.0;
    return alpha / (beta - 1.0) * std::pow(pga, -(beta - 1.0));
}

double PowerLawHazard::quantile_from_exceedance(double lambda) const {
    if (lambda >= 1.0) return pga_min;
    return std::pow(alpha / ((beta - 1.0) * lambda), 1.0 / (beta - 1.0));
}

PowerLawHazard fit_power_law(std::span<const ExceedancePoint> points) {
    if (points.size() < 3) throw FitError("fit_power_law: need at least 3 points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (const auto& p : points) {
        if (p.pga <= 0.0) throw FitError("fit_power_law: non-positive pga");
        if (p.probability <= 0.0 || p.probability >= 1.0)
            throw FitError("fit_power_law: exceedance must lie in (0,1)");
        const double x = std::log(p.pga);
        const double y = std::log(p.probability);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(points.size());
    const double denom = n * sxx - sx * sx;
    if (denom <= 0.0) throw FitError("fit_power_law: degenerate abscissae");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    const double beta = 1.0 - slope;
    if (beta <= 1.0) throw FitError("fit_power_law: estimated beta <= 1 (non-integrable)");
    const double alpha = std::exp(intercept) * (beta - 1.0);
    return PowerLawHazard::from_alpha_beta(alpha, beta);
}

double pga_density(const PowerLawHazard& h, double pga, double amplification) {
    if (amplification <= 0.0) throw InputError("pga_density: amplification must be positive");
    if (pga <= 0.0) throw InputError("pga_density: pga must be positive");
    // Z = s X  =>  f_Z(z) = f_X(z/s)/s.
    return h.density(pga / amplification) / amplification;
}

double FloodFrequency::pmf(int k) const {
    if (k < 0) return 0.0;
    const double r = nb_size, p = nb_prob;
    return std::exp(std::lgamma(k + r) - std::lgamma(r) - std::lgamma(k + 1.0) +
                    r * std::log(p) + k * std::log1p(-p));
}

double prob_at_least_one_flood(const FloodFrequency& ff, double p3_extent) {
    if (p3_extent < 0.0 || p3_extent > 1.0)
        throw InputError("prob_at_least_one_flood: p3 extent outside [0,1]");
    const double p = (1.0 - ff.pmf_zero()) * p3_extent * ff.mean_flooded_munis /
                     static_cast<double>(ff.cluster_size);
    return std::clamp(p, 0.0, 1.0);
}

namespace {

// Profile log-likelihood derivative in the size parameter r, with the
// probability concentrated out as p = r / (r + mean).
double nb_score(double r, std::span<const int> counts, double mean) {
    double s = 0.0;
    for (int y : counts) s += num::digamma(y + r);
    const double n = static_cast<double>(counts.size());
    return s - n * num::digamma(r) + n * std::log(r / (r + mean));
}

} // namespace

std::pair<double, double> fit_flood_frequency(std::span<const int> counts) {
    if (counts.size() < 10) throw FitError("fit_flood_frequency: need at least 10 observations");
    double sum = 0.0, sq = 0.0;
    for (int y : counts) {
        if (y < 0) throw FitError("fit_flood_frequency: negative count");
        sum += y;
        sq += static_cast<double>(y) * y;
    }
    const double n = static_cast<double>(counts.size());
    const double mean = sum / n;
    if (mean == 0.0) throw FitError("fit_flood_frequency: all-zero sample is degenerate");
    const double var = sq / n - mean * mean;

    constexpr double r_max = 1e7;
    double r;
    if (var <= mean) {
        // Poisson boundary: likelihood increases in r, report a large size.
        r = r_max;
    } else {
        const double r0 = mean * mean / (var - mean);   // method of moments
        double lo = std::max(1e-8, r0 / 64.0), hi = std::min(r_max, r0 * 64.0);
        while (nb_score(lo, counts, mean) < 0.0 && lo > 1e-12) lo /= 8.0;
        while (nb_score(hi, counts, mean) > 0.0 && hi < r_max) hi = std::min(r_max, hi * 8.0);
        const auto sol = num::bisect([&](double x) { return nb_score(x, counts, mean); },
                                     lo, hi, 1e-12, 200);
        r = sol.converged ? sol.root : r0;
    }
    const double p = r / (r + mean);
    return {r, p};
}

double DepthDistribution::pdf(double x) const {
    if (x <= 0.0) return 0.0;
    return std::exp(shape * std::log(rate) + (shape - 1.0) * std::log(x) - rate * x -
                    std::lgamma(shape));
}

double DepthDistribution::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    return num::gamma_p(shape, rate * x);
}

GammaFitReport fit_depth_gamma(std::span<const double> depths) {
    if (depths.size() < 10) throw FitError("fit_depth_gamma: need at least 10 observations");
    double sum = 0.0, sum_log = 0.0;
    for (double d : depths) {
        if (d <= 0.0) throw InputError("fit_depth_gamma: depths must be strictly positive");
        sum += d;
        sum_log += std::log(d);
    }
    const double n = static_cast<double>(depths.size());
    const double mean = sum / n;
    const double s = std::log(mean) - sum_log / n;
    if (s <= 0.0) throw FitError("fit_depth_gamma: degenerate sample (zero spread)");

    // Minka's initial guess, then Newton on log(a) - digamma(a) = s.
    double a = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    for (int i = 0; i < 50; ++i) {
        const double f = std::log(a) - num::digamma(a) - s;
        const double df = 1.0 / a - num::trigamma(a);
        const double next = a - f / df;
        if (!(next > 0.0)) break;
        if (std::fabs(next - a) < 1e-13 * a) {
            a = next;
            break;
        }
        a = next;
    }

    GammaFitReport report;
    report.dist.shape = a;
    report.dist.rate = a / mean;

    // Goodness of fit against a 50-bin histogram density.
    constexpr int bins = 50;
    const double hi = *std::max_element(depths.begin(), depths.end());
    const double width = hi / bins;
    std::vector<double> hist(bins, 0.0);
    for (double d : depths) {
        int b = std::min(bins - 1, static_cast<int>(d / width));
        hist[b] += 1.0 / (n * width);
    }
    for (int b = 0; b < bins; ++b) {
        const double mid = (b + 0.5) * width;
        const double diff = report.dist.pdf(mid) - hist[b];
        report.sse += diff * diff;
        report.sae += std::fabs(diff);
    }
    return report;
}

} // namespace natcat::hazard
