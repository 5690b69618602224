#include "natcat/simulate.hpp"
#include "natcat/errors.hpp"
#include "natcat/num.hpp"
#include "natcat/rng.hpp"

#include <algorithm>
#include <cmath>

namespace natcat::simulate {

std::vector<double> simulate_aggregate_claims(const portfolio::ClaimSeverity& claims,
                                              long n_draws, std::uint64_t seed,
                                              par::Exec exec) {
    if (n_draws < 10000) throw InputError("simulate_aggregate_claims: need at least 10^4 draws");
    const rng::CounterRng rng(seed);
    std::vector<double> draws(static_cast<std::size_t>(n_draws), 0.0);
    const std::size_t n = claims.size();
    par::for_each_index(draws.size(), [&](std::size_t d) {
        double y = 0.0;
        for (std::size_t c = 0; c < n; ++c)
            if (claims.q[c] > 0.0 && rng.u01(d, c) < claims.q[c]) y += claims.a[c];
        draws[d] = y;
    }, exec);
    return draws;
}

WilsonInterval wilson_95(long successes, long trials) {
    if (trials <= 0) throw InputError("wilson_95: no trials");
    const double z = num::kZ95;
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    WilsonInterval w{std::max(0.0, centre - half), std::min(1.0, centre + half)};
    if (successes == 0) w.lower = 0.0;
    if (successes == trials) w.upper = 1.0;
    return w;
}

SimulationReport check_bound_against(const std::vector<double>& draws,
                                     const portfolio::GroupSeverity& groups, double phi,
                                     std::uint64_t seed) {
    if (phi <= 0.0) throw InputError("check_bound: phi must be positive");
    SimulationReport report;
    report.n_draws = static_cast<long>(draws.size());
    report.seed = seed;
    report.phi = phi;
    report.threshold = groups.n_total() * phi + groups.e_y;
    long exceed = 0;
    for (double y : draws)
        if (y > report.threshold) ++exceed;
    report.empirical = static_cast<double>(exceed) / static_cast<double>(draws.size());
    report.interval = wilson_95(exceed, report.n_draws);
    const scheme::TailBound bound(groups, scheme::BoundMode::SimplifiedBernoulli);
    report.analytic_bound = bound.evaluate(phi);
    report.bound_respected = report.interval.lower <= report.analytic_bound;
    return report;
}

SimulationReport check_bound(const portfolio::ClaimSeverity& claims,
                             const portfolio::GroupSeverity& groups, double phi, long n_draws,
                             std::uint64_t seed, par::Exec exec) {
    const auto draws = simulate_aggregate_claims(claims, n_draws, seed, exec);
    return check_bound_against(draws, groups, phi, seed);
}

ExactDistribution enumerate_small(const portfolio::ClaimSeverity& claims) {
    const std::size_t n = claims.size();
    if (n > 20) throw InputError("enumerate_small: more than 20 municipalities");
    ExactDistribution dist;
    dist.atoms.reserve(std::size_t{1} << n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double y = 0.0, prob = 1.0;
        for (std::size_t c = 0; c < n; ++c) {
            if (mask & (std::uint64_t{1} << c)) {
                y += claims.a[c];
                prob *= claims.q[c];
            } else {
                prob *= 1.0 - claims.q[c];
            }
        }
        if (prob > 0.0) dist.atoms.emplace_back(y, prob);
    }
    std::sort(dist.atoms.begin(), dist.atoms.end());
    return dist;
}

double ExactDistribution::mean() const {
    double m = 0.0;
    for (const auto& [y, p] : atoms) m += y * p;
    return m;
}

double ExactDistribution::prob_greater(double t) const {
    double p = 0.0;
    for (const auto& [y, q] : atoms)
        if (y > t) p += q;
    return p;
}

double ExactDistribution::total_probability() const {
    double p = 0.0;
    for (const auto& [y, q] : atoms) p += q;
    return p;
}

} // namespace natcat::simulate
