#ifndef NATCAT_SIMULATE_HPP
#define NATCAT_SIMULATE_HPP

#include "natcat/par.hpp"
#include "natcat/portfolio.hpp"
#include "natcat/scheme.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace natcat::simulate {

// Monte Carlo draws of the aggregate claim Y = sum_c Bern(q_c) a_c with one
// counter-RNG stream per draw, so thread count never changes the numbers.
std::vector<double> simulate_aggregate_claims(const portfolio::ClaimSeverity& claims,
                                              long n_draws, std::uint64_t seed,
                                              par::Exec exec = par::default_exec());

struct WilsonInterval {
    double lower = 0.0;
    double upper = 1.0;
};
WilsonInterval wilson_95(long successes, long trials);

struct SimulationReport {
    long n_draws = 0;
    std::uint64_t seed = 0;
    double phi = 0.0;
    double threshold = 0.0;        // N_c phi + E[Y]
    double empirical = 0.0;        // fraction of draws above the threshold
    WilsonInterval interval;
    double analytic_bound = 0.0;
    bool bound_respected = true;   // violated only if the Wilson lower bound exceeds it
};

SimulationReport check_bound(const portfolio::ClaimSeverity& claims,
                             const portfolio::GroupSeverity& groups, double phi, long n_draws,
                             std::uint64_t seed, par::Exec exec = par::default_exec());

// Same, but against precomputed draws (one draw set can serve many thresholds).
SimulationReport check_bound_against(const std::vector<double>& draws,
                                     const portfolio::GroupSeverity& groups, double phi,
                                     std::uint64_t seed);

// Exact distribution of Y by enumerating all 2^n outcomes; n capped at 20.
struct ExactDistribution {
    std::vector<std::pair<double, double>> atoms;   // (value, probability), value-sorted

    double mean() const;
    double prob_greater(double t) const;
    double total_probability() const;
};

ExactDistribution enumerate_small(const portfolio::ClaimSeverity& claims);

} // namespace natcat::simulate

#endif
