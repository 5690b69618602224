#include "natcat/report.hpp"
#include "natcat/csv.hpp"
#include "natcat/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace natcat::report {

using nlohmann::json;

namespace {

std::string fmt(double v, int digits = 3) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

std::string mean_cov(const scheme::AggregatedField& f) {
    return fmt(f.mean) + " (" + fmt(f.cov) + ")";
}

std::string peril_name(loss::Peril peril) {
    switch (peril) {
        case loss::Peril::Seismic: return "seismic";
        case loss::Peril::Flood: return "flood";
        default: return "multi";
    }
}

} // namespace

void write_loss_surface(const portfolio::Portfolio& p, const portfolio::LossSurface& surface,
                        const std::filesystem::path& csv_path,
                        const std::filesystem::path& summary_path) {
    {
        csv::AtomicWriter w(csv_path);
        csv::write_row(w.stream(), {"municipality_id", "name", "typology", "loss_per_sqm",
                                    "exposure_sqm", "expected_loss"});
        for (const auto& cell : surface.cells) {
            const auto& m = p.munis[cell.muni_index];
            csv::write_row(w.stream(),
                           {m.id, m.name, cell.typology, csv::format_number(cell.loss_per_sqm),
                            csv::format_number(cell.exposure_sqm),
                            csv::format_number(cell.loss_per_sqm * cell.exposure_sqm)});
        }
        w.commit();
    }

    // Summary per typology: max loss per sqm (with municipality), max
    // municipal aggregate, total.
    struct Extreme {
        double max_l = -1.0;
        std::string max_l_where;
        double max_muni = -1.0;
        std::string max_muni_where;
        double total = 0.0;
    };
    std::map<std::string, Extreme> by_typ;
    std::map<std::string, std::map<std::string, double>> muni_typ_total;
    for (const auto& cell : surface.cells) {
        const auto& m = p.munis[cell.muni_index];
        auto& e = by_typ[cell.typology];
        if (cell.loss_per_sqm > e.max_l) {
            e.max_l = cell.loss_per_sqm;
            e.max_l_where = m.name;
        }
        e.total += cell.loss_per_sqm * cell.exposure_sqm;
        muni_typ_total[cell.typology][m.name] += cell.loss_per_sqm * cell.exposure_sqm;
    }
    for (auto& [typ, by_muni] : muni_typ_total)
        for (const auto& [name, total] : by_muni)
            if (total > by_typ[typ].max_muni) {
                by_typ[typ].max_muni = total;
                by_typ[typ].max_muni_where = name;
            }

    csv::AtomicWriter w(summary_path);
    auto& os = w.stream();
    os << "Expected " << peril_name(surface.peril) << " losses\n";
    os << "structure  max_l_per_sqm(eur)          max_municipal(Mln)          total(Mln)\n";
    double grand = 0.0;
    for (const auto& [typ, e] : by_typ) {
        char line[256];
        std::snprintf(line, sizeof line, "%-9s  %10.4f %-16s %10.4f %-16s %12.4f\n", typ.c_str(),
                      e.max_l, e.max_l_where.c_str(), e.max_muni / 1e6,
                      e.max_muni_where.c_str(), e.total / 1e6);
        os << line;
        grand += e.total;
    }
    os << "total (Mln): " << fmt(grand / 1e6) << "\n";
    if (surface.peril == loss::Peril::Flood && p.depth_fit) {
        char line[200];
        std::snprintf(line, sizeof line,
                      "depth fit: gamma(shape=%.6g, rate=%.6g), SSE=%.6g SAE=%.6g vs 50-bin "
                      "histogram\n",
                      p.depth_fit->dist.shape, p.depth_fit->dist.rate, p.depth_fit->sse,
                      p.depth_fit->sae);
        os << line;
    }
    w.commit();
}

void write_scheme_outputs(const portfolio::Portfolio& p, const pipeline::SchemeRun& run,
                          const std::filesystem::path& out_dir) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);

    {   // Aggregate report, one row per policy, mean (CoV) per column.
        csv::AtomicWriter w(out_dir / "scheme_report.txt");
        auto& os = w.stream();
        os << "Public-private scheme, peril=" << peril_name(run.config.peril)
           << ", eps1=" << csv::format_number(run.config.eps1)
           << ", eps2=" << csv::format_number(run.config.eps2)
           << ", r=" << csv::format_number(run.config.r_km) << " km, samplings="
           << run.groupings.size() << ", N_c=" << run.universe.size() << "\n";
        int flagged = 0;
        for (const auto& entry : run.policies) {
            if (entry.seismic_quotes) flagged += entry.seismic_quotes->flagged_cells;
            if (entry.flood_quotes) flagged += entry.flood_quotes->flagged_cells;
        }
        os << "values are mean (coefficient of variation); premiums and W_d in Mln euro\n";
        os << "cells without positive willingness to pay (excluded from sums): " << flagged
           << "\n\n";
        os << "  D     E      sum_p*           c                W_d*             eps1*        "
              "    eps2*\n";
        for (const auto& entry : run.policies) {
            const auto& s = entry.solution;
            char line[320];
            std::snprintf(line, sizeof line,
                          "%5.0f %5.0f  %-16s %-16s %-16s %-16s %-16s\n",
                          entry.policy.deductible, entry.policy.max_coverage,
                          (fmt(s.sum_p_star.mean / 1e6) + " (" + fmt(s.sum_p_star.cov) + ")").c_str(),
                          mean_cov(s.c).c_str(),
                          (fmt(s.w_d_star.mean / 1e6) + " (" + fmt(s.w_d_star.cov) + ")").c_str(),
                          mean_cov(s.eps1_star).c_str(), mean_cov(s.eps2_star).c_str());
            os << line;
        }
        w.commit();
    }
    {
        csv::AtomicWriter w(out_dir / "scheme_report.csv");
        csv::write_row(w.stream(), {"deductible", "max_coverage", "sum_p_star_mean",
                                    "sum_p_star_cov", "c_mean", "c_cov", "w_d_star_mean",
                                    "w_d_star_cov", "eps1_star_mean", "eps1_star_cov",
                                    "eps2_star_mean", "eps2_star_cov"});
        for (const auto& entry : run.policies) {
            const auto& s = entry.solution;
            csv::write_row(w.stream(),
                           {csv::format_number(entry.policy.deductible),
                            csv::format_number(entry.policy.max_coverage),
                            csv::format_number(s.sum_p_star.mean),
                            csv::format_number(s.sum_p_star.cov), csv::format_number(s.c.mean),
                            csv::format_number(s.c.cov), csv::format_number(s.w_d_star.mean),
                            csv::format_number(s.w_d_star.cov),
                            csv::format_number(s.eps1_star.mean),
                            csv::format_number(s.eps1_star.cov),
                            csv::format_number(s.eps2_star.mean),
                            csv::format_number(s.eps2_star.cov)});
        }
        w.commit();
    }

    {   // Per-cell premiums: willingness to pay and the scaled optimum.
        csv::AtomicWriter w(out_dir / "premiums.csv");
        csv::write_row(w.stream(), {"municipality_id", "typology", "deductible", "max_coverage",
                                    "p_h", "p_star", "flag"});
        for (const auto& entry : run.policies) {
            const double scale = std::min(entry.solution.c.mean, 1.0);
            auto emit = [&](const pricing::QuoteSurface& quotes) {
                for (std::size_t k = 0; k < quotes.universe.size(); ++k)
                    for (std::size_t t = 0; t < quotes.typologies.size(); ++t) {
                        const auto& q = quotes.at(k, t);
                        csv::write_row(
                            w.stream(),
                            {p.munis[q.muni_index].id, q.typology,
                             csv::format_number(entry.policy.deductible),
                             csv::format_number(entry.policy.max_coverage),
                             csv::format_number(q.p_h), csv::format_number(scale * q.p_h),
                             q.no_positive_wtp ? "no-positive-wtp" : ""});
                    }
            };
            if (entry.seismic_quotes) emit(*entry.seismic_quotes);
            if (entry.flood_quotes) emit(*entry.flood_quotes);
        }
        w.commit();
    }

    {   // Per-municipality claim severities per policy and peril.
        csv::AtomicWriter w(out_dir / "severities.csv");
        csv::write_row(w.stream(), {"municipality_id", "peril", "deductible", "max_coverage",
                                    "claim_probability", "severity"});
        for (const auto& entry : run.policies) {
            auto emit = [&](const portfolio::ClaimSeverity& claims, const char* peril) {
                for (std::size_t k = 0; k < claims.size(); ++k)
                    csv::write_row(w.stream(),
                                   {p.munis[claims.universe[k]].id, peril,
                                    csv::format_number(entry.policy.deductible),
                                    csv::format_number(entry.policy.max_coverage),
                                    csv::format_number(claims.q[k]),
                                    csv::format_number(claims.a[k])});
            };
            if (entry.seismic_claims) emit(*entry.seismic_claims, "seismic");
            if (entry.flood_claims) emit(*entry.flood_claims, "flood");
        }
        w.commit();
    }

    {   // Choropleth-ready GeoJSON for the first policy on the grid.
        const auto& entry = run.policies.front();
        const double scale = std::min(entry.solution.c.mean, 1.0);
        json features = json::array();
        for (std::size_t k = 0; k < run.universe.size(); ++k) {
            const auto& m = p.munis[run.universe[k]];
            json props{{"id", m.id}, {"name", m.name}};
            double weighted = 0.0, exposure = 0.0;
            auto add = [&](const pricing::QuoteSurface& quotes) {
                for (std::size_t t = 0; t < quotes.typologies.size(); ++t) {
                    const auto& q = quotes.at(k, t);
                    props["p_star_" + q.typology] = scale * q.p_h;
                    weighted += scale * q.p_h * m.exposure(q.typology);
                    exposure += m.exposure(q.typology);
                }
            };
            if (entry.seismic_quotes) add(*entry.seismic_quotes);
            if (entry.flood_quotes) add(*entry.flood_quotes);
            props["p_star_weighted"] = exposure > 0.0 ? weighted / exposure : 0.0;
            features.push_back(json{{"type", "Feature"},
                                    {"geometry",
                                     {{"type", "Point"}, {"coordinates", {m.lon, m.lat}}}},
                                    {"properties", props}});
        }
        json geo{{"type", "FeatureCollection"}, {"features", features}};
        csv::AtomicWriter w(out_dir / "premiums.geojson");
        w.stream() << geo.dump(1) << "\n";
        w.commit();
    }

    {   // Machine-readable solution for the bound checker.
        json root;
        root["peril"] = peril_name(run.config.peril);
        root["eps1"] = run.config.eps1;
        root["eps2"] = run.config.eps2;
        root["r_km"] = run.config.r_km;
        root["seed"] = run.config.seed;
        root["n_municipalities"] = run.universe.size();
        json ids = json::array();
        for (std::size_t idx : run.universe) ids.push_back(p.munis[idx].id);
        root["universe"] = ids;
        root["policies"] = json::array();
        for (const auto& entry : run.policies) {
            json jp;
            jp["deductible"] = entry.policy.deductible;
            jp["max_coverage"] = entry.policy.max_coverage;
            jp["sum_p_h"] = entry.sum_p_h;
            jp["e_y"] = entry.e_y;
            const auto claims = pipeline::simulation_claims(entry);
            jp["claims"] = {{"a", claims.a}, {"q", claims.q}};
            jp["samplings"] = json::array();
            for (std::size_t s = 0; s < entry.solution.per_sampling.size(); ++s) {
                const auto& sol = entry.solution.per_sampling[s];
                const auto& groups = entry.group_severities[s];
                jp["samplings"].push_back(json{{"phi", sol.phi},
                                               {"gamma", sol.gamma},
                                               {"phi_star", sol.phi_star},
                                               {"gamma_star", sol.gamma_star},
                                               {"eps1_star", sol.eps1_star},
                                               {"eps2_star", sol.eps2_star},
                                               {"w_d_star", sol.w_d_star},
                                               {"sum_p_star", sol.sum_p_star},
                                               {"c", sol.c},
                                               {"group_n", groups.n},
                                               {"group_b", groups.b},
                                               {"group_ey", groups.ey}});
            }
            root["policies"].push_back(std::move(jp));
        }
        csv::AtomicWriter w(out_dir / "scheme.json");
        w.stream() << root.dump(1) << "\n";
        w.commit();
    }
}

StoredScheme read_scheme_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    json root;
    try {
        in >> root;
    } catch (const std::exception& e) {
        throw InputError(path.string() + ": " + e.what());
    }
    StoredScheme stored;
    stored.peril = root.at("peril").get<std::string>();
    stored.eps1 = root.at("eps1").get<double>();
    stored.eps2 = root.at("eps2").get<double>();
    stored.seed = root.at("seed").get<std::uint64_t>();
    for (const auto& jp : root.at("policies")) {
        StoredPolicy sp;
        sp.deductible = jp.at("deductible").get<double>();
        sp.max_coverage = jp.at("max_coverage").get<double>();
        sp.e_y = jp.at("e_y").get<double>();
        sp.claims.a = jp.at("claims").at("a").get<std::vector<double>>();
        sp.claims.q = jp.at("claims").at("q").get<std::vector<double>>();
        sp.claims.universe.resize(sp.claims.a.size());
        sp.claims.expected_total = 0.0;
        for (std::size_t k = 0; k < sp.claims.a.size(); ++k)
            sp.claims.expected_total += sp.claims.a[k] * sp.claims.q[k];
        for (const auto& js : jp.at("samplings")) {
            StoredSampling ss;
            ss.phi = js.at("phi").get<double>();
            ss.gamma = js.at("gamma").get<double>();
            ss.phi_star = js.at("phi_star").get<double>();
            ss.gamma_star = js.at("gamma_star").get<double>();
            ss.eps1_star = js.at("eps1_star").get<double>();
            ss.eps2_star = js.at("eps2_star").get<double>();
            ss.groups.n = js.at("group_n").get<std::vector<double>>();
            ss.groups.b = js.at("group_b").get<std::vector<double>>();
            ss.groups.ey = js.at("group_ey").get<std::vector<double>>();
            double n_total = 0.0;
            for (double n : ss.groups.n) n_total += n;
            for (double n : ss.groups.n) ss.groups.w.push_back(n / n_total);
            for (double ey : ss.groups.ey) ss.groups.e_y += ey;
            sp.samplings.push_back(std::move(ss));
        }
        stored.policies.push_back(std::move(sp));
    }
    return stored;
}

void write_simulation_report(const std::vector<simulate::SimulationReport>& reports,
                             const std::filesystem::path& csv_path,
                             const std::filesystem::path& text_path) {
    {
        csv::AtomicWriter w(csv_path);
        csv::write_row(w.stream(), {"threshold", "empirical", "wilson_lower", "wilson_upper",
                                    "analytic_bound", "verdict"});
        for (const auto& r : reports)
            csv::write_row(w.stream(),
                           {csv::format_number(r.threshold), csv::format_number(r.empirical),
                            csv::format_number(r.interval.lower),
                            csv::format_number(r.interval.upper),
                            csv::format_number(r.analytic_bound),
                            r.bound_respected ? "bound-respected" : "bound-violated"});
        w.commit();
    }
    csv::AtomicWriter w(text_path);
    auto& os = w.stream();
    int violated = 0;
    for (const auto& r : reports)
        if (!r.bound_respected) ++violated;
    os << reports.size() << " bound checks, " << violated << " violated\n";
    for (const auto& r : reports) {
        char line[256];
        std::snprintf(line, sizeof line,
                      "threshold %.6g  empirical %.6g  [%.6g, %.6g]  bound %.6g  %s\n",
                      r.threshold, r.empirical, r.interval.lower, r.interval.upper,
                      r.analytic_bound, r.bound_respected ? "bound-respected" : "bound-violated");
        os << line;
    }
    w.commit();
}

void write_manifest(const std::filesystem::path& path, const std::string& subcommand,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    json root;
    root["tool"] = "natcat";
    root["version"] = "1.0.0";
    root["subcommand"] = subcommand;
    for (const auto& [k, v] : entries) root["flags"][k] = v;
    csv::AtomicWriter w(path);
    w.stream() << root.dump(1) << "\n";
    w.commit();
}

} // namespace natcat::report
