#include "natcat/rng.hpp"

#include <cmath>

namespace natcat::rng {

double StreamRng::normal() {
    // Box-Muller, cosine branch only to keep the draw count per call fixed.
    double u1 = u01();
    while (u1 <= 0.0) u1 = u01();
    const double u2 = u01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

double StreamRng::gamma(double shape, double rate) {
    // Marsaglia-Tsang squeeze for shape >= 1; boost by u^(1/shape) below 1.
    if (shape < 1.0) {
        const double u = std::max(u01(), 1e-300);
        return gamma(shape + 1.0, rate) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
        double x = normal();
        double v = 1.0 + c * x;
        if (v <= 0.0) continue;
        v = v * v * v;
        const double u = u01();
        if (u < 1.0 - 0.0331 * x * x * x * x) return d * v / rate;
        if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
}

std::uint64_t StreamRng::poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 60.0) {
        // Knuth inversion.
        const double limit = std::exp(-mean);
        double prod = u01();
        std::uint64_t k = 0;
        while (prod > limit) {
            ++k;
            prod *= u01();
        }
        return k;
    }
    // Split large means so the inversion loop stays short.
    return poisson(mean * 0.5) + poisson(mean - mean * 0.5);
}

std::uint64_t StreamRng::negative_binomial(double size, double prob) {
    // Gamma-Poisson mixture: lambda ~ Gamma(size, prob/(1-prob)).
    const double lambda = gamma(size, prob / (1.0 - prob));
    return poisson(lambda);
}

} // namespace natcat::rng
