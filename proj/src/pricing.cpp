#include "natcat/pricing.hpp"
#include "natcat/errors.hpp"
#include "natcat/num.hpp"

#include <cmath>

namespace natcat::pricing {

DemandQuote solve_wtp(const std::function<double(double)>& residual, double upper, double f_tol,
                      int max_iter) {
    DemandQuote quote;
    const double at_zero = residual(0.0);
    quote.residual = at_zero;
    if (at_zero >= -f_tol) {
        // Insurance brings no utility gain at any positive price; the only
        // root is zero. Flag only a genuinely positive residual.
        quote.no_positive_wtp = at_zero > f_tol;
        quote.p_h = 0.0;
        return quote;
    }
    if (residual(upper) <= 0.0) {
        // The bracket cap itself is still acceptable to the buyer; report it
        // flagged rather than inventing a root beyond the positive-log domain.
        quote.p_h = upper;
        quote.residual = residual(upper);
        quote.no_positive_wtp = true;
        return quote;
    }
    // Run the bracket down to machine width (60 halvings of [0, upper]) so the
    // premium itself is pinned, not just the residual.
    double lo = 0.0, hi = upper;
    for (int i = 0; i < max_iter && hi - lo > 1e-15 * upper; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (residual(mid) >= 0.0)
            hi = mid;
        else
            lo = mid;
    }
    quote.p_h = 0.5 * (lo + hi);
    quote.residual = residual(quote.p_h);
    if (std::fabs(quote.residual) > f_tol)
        throw NumericError("solve_wtp: residual above tolerance at the bracket limit");
    return quote;
}

namespace {

double premium_bracket(const loss::Policy& policy, double rc) {
    // Keep every log argument positive: the worst insured state retains
    // max_retained_loss, so premiums above rc - retained are never rational.
    // The 0.999 margin matches the worst-case premium the quadrature tables
    // are refined against.
    const double retained = loss::max_retained_loss(policy, rc);
    return 0.999 * std::max(0.0, std::min(rc, rc - retained));
}

} // namespace

DemandQuote solve_wtp_seismic(const loss::SeismicQuadrature& quad, const loss::Policy& policy,
                              double rc) {
    return solve_wtp([&](double p) { return quad.indifference_residual(policy, p); },
                     premium_bracket(policy, rc));
}

DemandQuote solve_wtp_flood(const loss::FloodCell& cell, const loss::Policy& policy) {
    return solve_wtp([&](double p) { return loss::flood_indifference_residual(cell, policy, p); },
                     premium_bracket(policy, cell.rc));
}

double multi_hazard_wtp(const DemandQuote& seismic, const DemandQuote& flood,
                        const loss::Policy& seismic_policy, const loss::Policy& flood_policy) {
    if (seismic_policy.deductible != flood_policy.deductible ||
        seismic_policy.max_coverage != flood_policy.max_coverage ||
        seismic_policy.cap != flood_policy.cap)
        throw InputError("multi_hazard_wtp: the two quotes must share policy terms");
    return seismic.p_h + flood.p_h;
}

QuoteSurface price_portfolio(const portfolio::Portfolio& p, loss::Peril peril,
                             const loss::Policy& policy, par::Exec exec,
                             std::optional<std::vector<std::size_t>> universe) {
    if (peril == loss::Peril::Multi)
        throw InputError("price_portfolio prices one peril; sum the quotes for multi-hazard");
    policy.validate(p.rc);
    QuoteSurface surface;
    surface.peril = peril;
    surface.universe = universe ? std::move(*universe) : portfolio::peril_universe(p, peril);
    surface.typologies =
        peril == loss::Peril::Seismic ? geo::seismic_typologies() : geo::flood_typologies();

    const std::size_t nt = surface.typologies.size();
    surface.quotes.resize(surface.universe.size() * nt);
    surface.expected_reimbursement.assign(surface.universe.size() * nt, 0.0);
    par::for_each_index(surface.universe.size(), [&](std::size_t k) {
        const auto& m = p.munis[surface.universe[k]];
        for (std::size_t t = 0; t < nt; ++t) {
            DemandQuote q;
            double ex = 0.0;
            if (peril == loss::Peril::Seismic) {
                if (p.has_seismic(m)) {
                    const auto cell = p.seismic_cell(m, surface.typologies[t]);
                    const loss::SeismicQuadrature quad(cell, &policy);
                    q = solve_wtp_seismic(quad, policy, p.rc);
                    ex = quad.expected_reimbursement(policy);
                }
            } else {
                const auto cell = p.flood_cell(m, surface.typologies[t]);
                q = solve_wtp_flood(cell, policy);
                ex = loss::expected_reimbursement_flood(cell, policy);
            }
            q.muni_index = surface.universe[k];
            q.typology = surface.typologies[t];
            surface.quotes[k * nt + t] = std::move(q);
            surface.expected_reimbursement[k * nt + t] = ex;
        }
    }, exec);

    for (std::size_t k = 0; k < surface.universe.size(); ++k) {
        const auto& m = p.munis[surface.universe[k]];
        for (std::size_t t = 0; t < nt; ++t) {
            const auto& q = surface.at(k, t);
            if (q.no_positive_wtp) {
                ++surface.flagged_cells;
                continue;
            }
            surface.sum_p_h_m += q.p_h * m.exposure(surface.typologies[t]);
        }
    }
    return surface;
}

} // namespace natcat::pricing
