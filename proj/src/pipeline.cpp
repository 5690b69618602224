#include "natcat/pipeline.hpp"
#include "natcat/errors.hpp"

#include <algorithm>

namespace natcat::pipeline {

namespace {

// One pass per (municipality, typology): the policy-aware quadrature table is
// built once and serves both the premium solve and the expected
// reimbursement, which the per-policy loop would otherwise recompute.
void price_and_severities(const portfolio::Portfolio& p, loss::Peril peril,
                          const loss::Policy& policy,
                          const std::vector<std::size_t>& universe, par::Exec exec,
                          pricing::QuoteSurface& quotes, portfolio::ClaimSeverity& claims) {
    quotes.peril = peril;
    quotes.universe = universe;
    quotes.typologies =
        peril == loss::Peril::Seismic ? geo::seismic_typologies() : geo::flood_typologies();
    const std::size_t nt = quotes.typologies.size();
    quotes.quotes.assign(universe.size() * nt, pricing::DemandQuote{});
    quotes.expected_reimbursement.assign(universe.size() * nt, 0.0);

    claims.peril = peril;
    claims.universe = universe;
    claims.a.assign(universe.size(), 0.0);
    claims.q.assign(universe.size(), 0.0);

    par::for_each_index(universe.size(), [&](std::size_t k) {
        const auto& m = p.munis[universe[k]];
        double expected = 0.0;
        double q = 0.0;
        bool any_exposed = false;
        double min_cut = 0.0;   // deductible-crossing intensity across typologies
        for (std::size_t t = 0; t < nt; ++t) {
            const auto& typ = quotes.typologies[t];
            const double sqm = m.exposure(typ);
            pricing::DemandQuote quote;
            double cell_ex = 0.0;
            if (peril == loss::Peril::Seismic) {
                const auto cell = p.seismic_cell(m, typ);
                const loss::SeismicQuadrature quad(cell, &policy);
                quote = pricing::solve_wtp_seismic(quad, policy, p.rc);
                cell_ex = quad.expected_reimbursement(policy);
                if (sqm > 0.0) {
                    expected += sqm * cell_ex;
                    const double u_d = policy.deductible > 0.0
                                           ? loss::seismic_loss_inverse(cell, policy.deductible)
                                           : cell.hazard.pga_min;
                    min_cut = any_exposed ? std::min(min_cut, u_d) : u_d;
                    any_exposed = true;
                }
            } else {
                const auto cell = p.flood_cell(m, typ);
                quote = pricing::solve_wtp_flood(cell, policy);
                cell_ex = loss::expected_reimbursement_flood(cell, policy);
                if (sqm > 0.0) {
                    expected += sqm * cell_ex;
                    const double delta_d = vuln::invert_depth(
                        cell.curve, std::min(100.0, 100.0 * policy.deductible / p.rc));
                    min_cut = any_exposed ? std::min(min_cut, delta_d) : delta_d;
                    any_exposed = true;
                }
            }
            quote.muni_index = universe[k];
            quote.typology = typ;
            quotes.quotes[k * nt + t] = std::move(quote);
            quotes.expected_reimbursement[k * nt + t] = cell_ex;
        }
        if (any_exposed) {
            if (peril == loss::Peril::Seismic) {
                q = std::min(1.0, p.seismic_hazard.at(m.id).exceedance(min_cut));
            } else {
                const double freq = p.flood_prob(m);
                q = freq > 0.0 ? freq * (1.0 - p.depth->cdf(min_cut)) : 0.0;
            }
        }
        if (q <= 0.0 && expected > 0.0)
            throw NumericError("municipality " + m.id +
                               ": zero claim probability with positive expected reimbursement");
        claims.q[k] = q;
        claims.a[k] = q > 0.0 ? expected / q : 0.0;
    }, exec);

    quotes.sum_p_h_m = 0.0;
    quotes.flagged_cells = 0;
    for (std::size_t k = 0; k < universe.size(); ++k) {
        const auto& m = p.munis[universe[k]];
        for (std::size_t t = 0; t < nt; ++t) {
            const auto& quote = quotes.at(k, t);
            if (quote.no_positive_wtp) {
                ++quotes.flagged_cells;
                continue;
            }
            quotes.sum_p_h_m += quote.p_h * m.exposure(quotes.typologies[t]);
        }
    }
    claims.expected_total = 0.0;
    for (std::size_t k = 0; k < claims.size(); ++k)
        claims.expected_total += claims.q[k] * claims.a[k];
}

} // namespace

SchemeRun run_scheme(const portfolio::Portfolio& p, const SchemeConfig& config,
                     par::Exec exec) {
    if (config.eps2 < config.eps1)
        throw InputError("eps2 < eps1: insolvency must never be preferred to a refill");
    if (!(config.eps1 > 0.0) || !(config.eps2 < 1.0))
        throw InputError("eps targets must lie in (0,1)");
    if (config.samplings < 1) throw InputError("need at least one grouping sampling");

    SchemeRun run;
    run.config = config;
    run.universe = portfolio::peril_universe(p, config.peril);
    if (run.universe.empty()) throw InputError("no municipality carries the requested peril");

    std::vector<geo::Municipality> universe_munis;
    universe_munis.reserve(run.universe.size());
    for (std::size_t idx : run.universe) universe_munis.push_back(p.munis[idx]);
    run.groupings = geo::sample_groupings(universe_munis, config.r_km, config.samplings,
                                          config.seed, exec);

    for (double d : config.deductibles) {
        for (double e : config.max_coverages) {
            PolicyResult result;
            result.policy =
                loss::Policy{d, e, config.peril, config.cap};
            result.policy.validate(p.rc);

            const bool want_seismic =
                config.peril == loss::Peril::Seismic || config.peril == loss::Peril::Multi;
            const bool want_flood =
                config.peril == loss::Peril::Flood || config.peril == loss::Peril::Multi;

            if (want_seismic) {
                result.seismic_quotes.emplace();
                result.seismic_claims.emplace();
                price_and_severities(p, loss::Peril::Seismic, result.policy, run.universe, exec,
                                     *result.seismic_quotes, *result.seismic_claims);
                result.sum_p_h += result.seismic_quotes->sum_p_h_m;
            }
            if (want_flood) {
                result.flood_quotes.emplace();
                result.flood_claims.emplace();
                price_and_severities(p, loss::Peril::Flood, result.policy, run.universe, exec,
                                     *result.flood_quotes, *result.flood_claims);
                result.sum_p_h += result.flood_quotes->sum_p_h_m;
            }

            std::vector<scheme::SchemeSolution> per_sampling(run.groupings.size());
            result.group_severities.resize(run.groupings.size());
            par::for_each_index(run.groupings.size(), [&](std::size_t s) {
                portfolio::GroupSeverity groups;
                scheme::TailBound bound = [&] {
                    if (config.peril == loss::Peril::Multi) {
                        portfolio::MultiHazardSeverity mh{*result.seismic_claims,
                                                          *result.flood_claims};
                        groups = portfolio::group_severity_multi(mh, run.groupings[s]);
                        return scheme::TailBound(groups, config.mode, &run.groupings[s], nullptr,
                                                 &mh);
                    }
                    const auto& claims = config.peril == loss::Peril::Seismic
                                             ? *result.seismic_claims
                                             : *result.flood_claims;
                    groups = portfolio::group_severity(claims, run.groupings[s]);
                    return scheme::TailBound(groups, config.mode, &run.groupings[s], &claims,
                                             nullptr);
                }();
                per_sampling[s] =
                    scheme::solve_scheme(bound, result.sum_p_h, config.eps1, config.eps2);
                result.group_severities[s] = std::move(groups);
            }, exec);
            result.e_y = per_sampling.front().e_y;
            result.solution = scheme::aggregate_over_samplings(std::move(per_sampling));
            run.policies.push_back(std::move(result));
        }
    }
    return run;
}

portfolio::ClaimSeverity simulation_claims(const PolicyResult& result) {
    if (result.seismic_claims && result.flood_claims) {
        portfolio::ClaimSeverity combined;
        combined.peril = loss::Peril::Multi;
        combined.universe = result.seismic_claims->universe;
        combined.universe.insert(combined.universe.end(), result.flood_claims->universe.begin(),
                                 result.flood_claims->universe.end());
        combined.a = result.seismic_claims->a;
        combined.a.insert(combined.a.end(), result.flood_claims->a.begin(),
                          result.flood_claims->a.end());
        combined.q = result.seismic_claims->q;
        combined.q.insert(combined.q.end(), result.flood_claims->q.begin(),
                          result.flood_claims->q.end());
        combined.expected_total =
            result.seismic_claims->expected_total + result.flood_claims->expected_total;
        return combined;
    }
    if (result.seismic_claims) return *result.seismic_claims;
    if (result.flood_claims) return *result.flood_claims;
    throw InputError("policy result carries no severities");
}

} // namespace natcat::pipeline
