#ifndef NATCAT_PRICING_HPP
#define NATCAT_PRICING_HPP

#include "natcat/loss.hpp"
#include "natcat/par.hpp"
#include "natcat/portfolio.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace natcat::pricing {

struct DemandQuote {
    std::size_t muni_index = 0;
    std::string typology;
    double p_h = 0.0;         // maximum willingness-to-pay premium, euro per sqm
    double residual = 0.0;    // indifference functional at p_h
    bool no_positive_wtp = false;
};

// Solves residual(p) = 0 by bisection on [0, upper]; residual must be
// increasing in p and weakly negative at p = 0.
DemandQuote solve_wtp(const std::function<double(double)>& residual, double upper,
                      double f_tol = 1e-8, int max_iter = 60);

DemandQuote solve_wtp_seismic(const loss::SeismicQuadrature& quad, const loss::Policy& policy,
                              double rc);
DemandQuote solve_wtp_flood(const loss::FloodCell& cell, const loss::Policy& policy);

// Sum of the single-peril quotes; the two must be priced on identical terms.
double multi_hazard_wtp(const DemandQuote& seismic, const DemandQuote& flood,
                        const loss::Policy& seismic_policy, const loss::Policy& flood_policy);

struct QuoteSurface {
    loss::Peril peril = loss::Peril::Seismic;
    std::vector<std::size_t> universe;
    std::vector<std::string> typologies;
    std::vector<DemandQuote> quotes;             // universe-major, typology-minor
    std::vector<double> expected_reimbursement;  // same layout as quotes
    double sum_p_h_m = 0.0;                      // sum over cells of p_h * exposure
    int flagged_cells = 0;

    const DemandQuote& at(std::size_t universe_pos, std::size_t typology_pos) const {
        return quotes[universe_pos * typologies.size() + typology_pos];
    }
};

// Prices every (municipality, typology) cell of one peril. The universe
// defaults to the peril's own; the multi-hazard pipeline passes the shared one.
QuoteSurface price_portfolio(const portfolio::Portfolio& p, loss::Peril peril,
                             const loss::Policy& policy,
                             par::Exec exec = par::default_exec(),
                             std::optional<std::vector<std::size_t>> universe = std::nullopt);

} // namespace natcat::pricing

#endif
