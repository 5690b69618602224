#ifndef NATCAT_PORTFOLIO_HPP
#define NATCAT_PORTFOLIO_HPP

#include "natcat/geo.hpp"
#include "natcat/hazard.hpp"
#include "natcat/loss.hpp"
#include "natcat/par.hpp"
#include "natcat/vulnerability.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace natcat::portfolio {

// Everything the pipeline needs past ingestion: the municipality universe
// plus fitted hazard objects and the vulnerability assets.
struct Portfolio {
    std::vector<geo::Municipality> munis;
    std::unordered_map<std::string, hazard::PowerLawHazard> seismic_hazard;   // by muni id
    std::map<geo::FloodCluster, hazard::FloodFrequency> flood_frequency;
    std::optional<hazard::DepthDistribution> depth;
    std::optional<hazard::GammaFitReport> depth_fit;   // SSE/SAE vs the histogram
    vuln::FragilityCatalogue catalogue;
    vuln::DepthDamageSet depth_damage;
    double rc = 1500.0;

    bool has_seismic(const geo::Municipality& m) const {
        return seismic_hazard.count(m.id) > 0;
    }
    bool has_flood(const geo::Municipality& m) const {
        return m.cluster != geo::FloodCluster::None && depth.has_value() &&
               flood_frequency.count(m.cluster) > 0;
    }

    // P(N_F >= 1) for one municipality (zero when it carries no flood data).
    double flood_prob(const geo::Municipality& m) const;

    loss::SeismicCell seismic_cell(const geo::Municipality& m, const std::string& typology) const;
    loss::FloodCell flood_cell(const geo::Municipality& m, const std::string& typology) const;
};

// Reads a bundle directory (municipalities.csv, exceedance.csv, optional
// flood_counts.csv / depths.csv / clusters.csv, catalogue assets), fits the
// hazard models, and drops municipalities with no hazard data at all.
Portfolio load_portfolio(const std::filesystem::path& dir, double rc = 1500.0);

// Municipality indices with data for the requested peril; multi requires both.
std::vector<std::size_t> peril_universe(const Portfolio& p, loss::Peril peril);

struct CellLoss {
    std::size_t muni_index = 0;
    std::string typology;
    double loss_per_sqm = 0.0;
    double exposure_sqm = 0.0;
};

struct LossSurface {
    loss::Peril peril = loss::Peril::Seismic;
    std::vector<std::size_t> universe;       // municipality indices covered
    std::vector<CellLoss> cells;
    std::vector<double> municipal_total;     // aligned with `universe`
    double national_total = 0.0;
};

LossSurface compute_loss_surface(const Portfolio& p, loss::Peril peril,
                                 par::Exec exec = par::default_exec());

// Per-municipality Bernoulli claim model: claim probability q_c and severity
// a_c = expected reimbursement / q_c, so that q_c * a_c reproduces the
// municipal expected reimbursement exactly.
struct ClaimSeverity {
    loss::Peril peril = loss::Peril::Seismic;
    std::vector<std::size_t> universe;
    std::vector<double> a;            // euro
    std::vector<double> q;            // claim probability
    double expected_total = 0.0;      // E[Y] = sum q_c a_c

    std::size_t size() const { return universe.size(); }
};

ClaimSeverity claim_severities(const Portfolio& p, loss::Peril peril, const loss::Policy& policy,
                               par::Exec exec = par::default_exec());

// Group-level aggregation of severities over one grouping sample. The grouping
// must have been built on the same universe (indices are positions within it).
struct GroupSeverity {
    std::vector<double> b;      // sum of a_c per group
    std::vector<double> ey;     // expected claims per group
    std::vector<double> n;      // group sizes
    std::vector<double> w;      // n_g / N
    double e_y = 0.0;

    double n_total() const {
        double t = 0.0;
        for (double x : n) t += x;
        return t;
    }
};

GroupSeverity group_severity(const ClaimSeverity& claims, const geo::GroupingSample& grouping);

// Combined multi-hazard severities: same universe, summed per peril.
struct MultiHazardSeverity {
    ClaimSeverity seismic;
    ClaimSeverity flood;
};

GroupSeverity group_severity_multi(const MultiHazardSeverity& mh,
                                   const geo::GroupingSample& grouping);

} // namespace natcat::portfolio

#endif
