#ifndef NATCAT_PIPELINE_HPP
#define NATCAT_PIPELINE_HPP

#include "natcat/geo.hpp"
#include "natcat/loss.hpp"
#include "natcat/par.hpp"
#include "natcat/portfolio.hpp"
#include "natcat/pricing.hpp"
#include "natcat/scheme.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace natcat::pipeline {

struct SchemeConfig {
    loss::Peril peril = loss::Peril::Seismic;
    std::vector<double> deductibles{0.0, 200.0};
    std::vector<double> max_coverages{1500.0, 1200.0};
    double eps1 = 0.01;
    double eps2 = 0.02;
    double r_km = 50.0;
    int samplings = 100;
    std::uint64_t seed = 42;
    scheme::BoundMode mode = scheme::BoundMode::SimplifiedBernoulli;
    loss::CapConvention cap = loss::CapConvention::DeductiblePlusCoverage;
};

struct PolicyResult {
    loss::Policy policy;
    double sum_p_h = 0.0;
    double e_y = 0.0;
    // Quote surfaces per peril (flood slot empty for seismic runs and so on).
    std::optional<pricing::QuoteSurface> seismic_quotes;
    std::optional<pricing::QuoteSurface> flood_quotes;
    // Severities on the run universe; both present for multi-hazard.
    std::optional<portfolio::ClaimSeverity> seismic_claims;
    std::optional<portfolio::ClaimSeverity> flood_claims;
    scheme::AggregatedSolution solution;
    std::vector<portfolio::GroupSeverity> group_severities;   // one per sampling
};

struct SchemeRun {
    SchemeConfig config;
    std::vector<std::size_t> universe;           // municipality indices
    std::vector<geo::GroupingSample> groupings;  // shared across the policy grid
    std::vector<PolicyResult> policies;
};

SchemeRun run_scheme(const portfolio::Portfolio& p, const SchemeConfig& config,
                     par::Exec exec = par::default_exec());

// Bernoulli claim list driving the aggregate-claims simulation; multi-hazard
// concatenates the two independent per-peril lists.
portfolio::ClaimSeverity simulation_claims(const PolicyResult& result);

} // namespace natcat::pipeline

#endif
