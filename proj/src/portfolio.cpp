#include "natcat/portfolio.hpp"
#include "natcat/csv.hpp"
#include "natcat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace natcat::portfolio {

double Portfolio::flood_prob(const geo::Municipality& m) const {
    if (!has_flood(m)) return 0.0;
    return hazard::prob_at_least_one_flood(flood_frequency.at(m.cluster), m.p3_extent);
}

loss::SeismicCell Portfolio::seismic_cell(const geo::Municipality& m,
                                          const std::string& typology) const {
    loss::SeismicCell cell;
    cell.hazard = seismic_hazard.at(m.id);
    cell.amplification = m.amplification;
    cell.models = catalogue.models_for(typology);
    cell.rc = rc;
    return cell;
}

loss::FloodCell Portfolio::flood_cell(const geo::Municipality& m,
                                      const std::string& typology) const {
    loss::FloodCell cell;
    cell.freq_prob = flood_prob(m);
    cell.depth = *depth;
    cell.curve = depth_damage.for_storeys(vuln::storey_from_typology(typology));
    cell.rc = rc;
    return cell;
}

Portfolio load_portfolio(const std::filesystem::path& dir, double rc) {
    namespace fs = std::filesystem;
    Portfolio p;
    p.rc = rc;
    p.munis = geo::load_municipalities_csv(dir / "municipalities.csv");

    // Per-municipality exceedance curves.
    const fs::path exc_path = dir / "exceedance.csv";
    if (fs::exists(exc_path)) {
        const auto table = csv::Table::read_file(exc_path);
        std::unordered_map<std::string, std::vector<hazard::ExceedancePoint>> points;
        for (std::size_t r = 0; r < table.rows(); ++r)
            points[table.cell(r, "municipality_id")].push_back(
                {table.number(r, "pga"), table.number(r, "exceedance_prob")});
        for (auto& [id, pts] : points) {
            try {
                p.seismic_hazard.emplace(id, hazard::fit_power_law(pts));
            } catch (const FitError& e) {
                throw FitError("exceedance curve for municipality " + id + ": " + e.what());
            }
        }
    }

    // Cluster metadata plus yearly flood counts and event depths.
    const fs::path counts_path = dir / "flood_counts.csv";
    const fs::path depths_path = dir / "depths.csv";
    const fs::path clusters_path = dir / "clusters.csv";
    if (fs::exists(counts_path) && fs::exists(depths_path)) {
        std::map<geo::FloodCluster, double> mean_flooded;
        if (fs::exists(clusters_path)) {
            const auto table = csv::Table::read_file(clusters_path);
            for (std::size_t r = 0; r < table.rows(); ++r)
                mean_flooded[geo::cluster_from_string(table.cell(r, "cluster"))] =
                    table.number(r, "mean_flooded_munis");
        }
        std::map<geo::FloodCluster, std::vector<int>> counts;
        const auto table = csv::Table::read_file(counts_path);
        for (std::size_t r = 0; r < table.rows(); ++r)
            counts[geo::cluster_from_string(table.cell(r, "cluster"))].push_back(
                static_cast<int>(table.integer(r, "n_events")));
        std::map<geo::FloodCluster, int> cluster_sizes;
        for (const auto& m : p.munis)
            if (m.cluster != geo::FloodCluster::None) ++cluster_sizes[m.cluster];
        for (auto& [cluster, series] : counts) {
            hazard::FloodFrequency ff;
            std::tie(ff.nb_size, ff.nb_prob) = hazard::fit_flood_frequency(series);
            ff.cluster_size = std::max(1, cluster_sizes.count(cluster)
                                              ? cluster_sizes.at(cluster)
                                              : 0);
            ff.mean_flooded_munis = mean_flooded.count(cluster)
                                        ? mean_flooded.at(cluster)
                                        : std::max(1.0, 0.05 * ff.cluster_size);
            p.flood_frequency[cluster] = ff;
        }

        const auto dt = csv::Table::read_file(depths_path);
        std::vector<double> depths;
        depths.reserve(dt.rows());
        for (std::size_t r = 0; r < dt.rows(); ++r) depths.push_back(dt.number(r, "depth_m"));
        p.depth_fit = hazard::fit_depth_gamma(depths);
        p.depth = p.depth_fit->dist;
    }

    // Vulnerability assets: bundle copies if present, built-in text otherwise.
    const fs::path frag_path = dir / "fragility_curves.txt";
    if (fs::exists(frag_path)) {
        p.catalogue = vuln::load_fragility_catalogue_file(frag_path);
    } else {
        std::istringstream in(vuln::default_fragility_catalogue_text());
        p.catalogue = vuln::load_fragility_catalogue(in);
    }
    const fs::path dd_path = dir / "depth_damage.txt";
    if (fs::exists(dd_path)) {
        p.depth_damage = vuln::load_depth_damage_file(dd_path);
    } else {
        std::istringstream in(vuln::default_depth_damage_text());
        p.depth_damage = vuln::load_depth_damage(in);
    }

    // Municipalities with no hazard data at all are dropped up front.
    std::vector<geo::Municipality> kept;
    kept.reserve(p.munis.size());
    for (auto& m : p.munis)
        if (p.has_seismic(m) || p.has_flood(m)) kept.push_back(std::move(m));
    p.munis = std::move(kept);
    if (p.munis.empty()) throw InputError("portfolio: no municipality has usable hazard data");
    return p;
}

std::vector<std::size_t> peril_universe(const Portfolio& p, loss::Peril peril) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < p.munis.size(); ++i) {
        const auto& m = p.munis[i];
        const bool s = p.has_seismic(m);
        const bool f = p.has_flood(m);
        if ((peril == loss::Peril::Seismic && s) || (peril == loss::Peril::Flood && f) ||
            (peril == loss::Peril::Multi && s && f))
            out.push_back(i);
    }
    return out;
}

namespace {

const std::vector<std::string>& typologies_for(loss::Peril peril) {
    return peril == loss::Peril::Seismic ? geo::seismic_typologies() : geo::flood_typologies();
}

} // namespace

LossSurface compute_loss_surface(const Portfolio& p, loss::Peril peril, par::Exec exec) {
    if (peril == loss::Peril::Multi)
        throw InputError("loss surfaces are per peril; run seismic and flood separately");
    LossSurface surface;
    surface.peril = peril;
    surface.universe = peril_universe(p, peril);
    const auto& typs = typologies_for(peril);

    surface.cells.resize(surface.universe.size() * typs.size());
    par::for_each_index(surface.universe.size(), [&](std::size_t k) {
        const auto& m = p.munis[surface.universe[k]];
        for (std::size_t t = 0; t < typs.size(); ++t) {
            CellLoss cell;
            cell.muni_index = surface.universe[k];
            cell.typology = typs[t];
            cell.exposure_sqm = m.exposure(typs[t]);
            cell.loss_per_sqm = (peril == loss::Peril::Seismic)
                                    ? loss::seismic_loss_per_sqm(p.seismic_cell(m, typs[t]))
                                    : loss::flood_loss_per_sqm(p.flood_cell(m, typs[t]));
            surface.cells[k * typs.size() + t] = std::move(cell);
        }
    }, exec);

    surface.municipal_total.assign(surface.universe.size(), 0.0);
    for (std::size_t k = 0; k < surface.universe.size(); ++k) {
        for (std::size_t t = 0; t < typs.size(); ++t) {
            const auto& cell = surface.cells[k * typs.size() + t];
            surface.municipal_total[k] += cell.loss_per_sqm * cell.exposure_sqm;
        }
        surface.national_total += surface.municipal_total[k];
    }
    return surface;
}

ClaimSeverity claim_severities(const Portfolio& p, loss::Peril peril,
                               const loss::Policy& policy, par::Exec exec) {
    if (peril == loss::Peril::Multi)
        throw InputError("claim severities are per peril; combine with MultiHazardSeverity");
    policy.validate(p.rc);
    ClaimSeverity claims;
    claims.peril = peril;
    claims.universe = peril_universe(p, peril);
    const auto& typs = typologies_for(peril);
    const std::size_t n = claims.universe.size();
    claims.a.assign(n, 0.0);
    claims.q.assign(n, 0.0);

    par::for_each_index(n, [&](std::size_t k) {
        const auto& m = p.munis[claims.universe[k]];
        double expected = 0.0;      // sum_j M_jc E[x(l_jc)]
        double q = 0.0;
        if (peril == loss::Peril::Seismic) {
            double min_u_d = 0.0;
            bool any = false;
            for (const auto& typ : typs) {
                const double sqm = m.exposure(typ);
                if (sqm <= 0.0) continue;
                const auto cell = p.seismic_cell(m, typ);
                expected += sqm * loss::expected_reimbursement_seismic(cell, policy);
                const double u_d = policy.deductible > 0.0
                                       ? loss::seismic_loss_inverse(cell, policy.deductible)
                                       : cell.hazard.pga_min;
                min_u_d = any ? std::min(min_u_d, u_d) : u_d;
                any = true;
            }
            if (any) {
                const auto& h = p.seismic_hazard.at(m.id);
                q = std::min(1.0, h.exceedance(min_u_d));
            }
        } else {
            const double freq = p.flood_prob(m);
            double min_delta_d = 0.0;
            bool any = false;
            for (const auto& typ : typs) {
                const double sqm = m.exposure(typ);
                if (sqm <= 0.0) continue;
                const auto cell = p.flood_cell(m, typ);
                expected += sqm * loss::expected_reimbursement_flood(cell, policy);
                const double delta_d = vuln::invert_depth(
                    cell.curve, std::min(100.0, 100.0 * policy.deductible / p.rc));
                min_delta_d = any ? std::min(min_delta_d, delta_d) : delta_d;
                any = true;
            }
            if (any && freq > 0.0) q = freq * (1.0 - p.depth->cdf(min_delta_d));
        }
        if (q <= 0.0 && expected > 0.0)
            throw NumericError("municipality " + m.id +
                               ": zero claim probability with positive expected reimbursement");
        claims.q[k] = q;
        claims.a[k] = q > 0.0 ? expected / q : 0.0;
    }, exec);

    claims.expected_total = 0.0;
    for (std::size_t k = 0; k < n; ++k) claims.expected_total += claims.q[k] * claims.a[k];
    return claims;
}

GroupSeverity group_severity(const ClaimSeverity& claims, const geo::GroupingSample& grouping) {
    std::size_t covered = 0;
    GroupSeverity gs;
    gs.b.reserve(grouping.groups.size());
    for (std::size_t g = 0; g < grouping.groups.size(); ++g) {
        double b = 0.0, ey = 0.0;
        for (std::size_t idx : grouping.groups[g]) {
            if (idx >= claims.size())
                throw InputError("group_severity: grouping index outside the claim universe");
            b += claims.a[idx];
            ey += claims.q[idx] * claims.a[idx];
            ++covered;
        }
        gs.b.push_back(b);
        gs.ey.push_back(ey);
        gs.n.push_back(static_cast<double>(grouping.groups[g].size()));
        gs.w.push_back(grouping.weights[g]);
        gs.e_y += ey;
    }
    if (covered != claims.size())
        throw InputError("group_severity: grouping does not cover the claim universe");
    return gs;
}

GroupSeverity group_severity_multi(const MultiHazardSeverity& mh,
                                   const geo::GroupingSample& grouping) {
    if (mh.seismic.size() != mh.flood.size())
        throw InputError("multi-hazard severities must share one universe");
    for (std::size_t k = 0; k < mh.seismic.size(); ++k)
        if (mh.seismic.universe[k] != mh.flood.universe[k])
            throw InputError("multi-hazard severities must share one universe");
    GroupSeverity gs;
    for (std::size_t g = 0; g < grouping.groups.size(); ++g) {
        double b = 0.0, ey = 0.0;
        for (std::size_t idx : grouping.groups[g]) {
            if (idx >= mh.seismic.size())
                throw InputError("group_severity_multi: index outside the claim universe");
            b += mh.seismic.a[idx] + mh.flood.a[idx];
            ey += mh.seismic.q[idx] * mh.seismic.a[idx] + mh.flood.q[idx] * mh.flood.a[idx];
        }
        gs.b.push_back(b);
        gs.ey.push_back(ey);
        gs.n.push_back(static_cast<double>(grouping.groups[g].size()));
        gs.w.push_back(grouping.weights[g]);
        gs.e_y += ey;
    }
    return gs;
}

} // namespace natcat::portfolio
