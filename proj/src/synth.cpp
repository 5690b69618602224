#include "natcat/synth.hpp"
#include "natcat/csv.hpp"
#include "natcat/errors.hpp"
#include "natcat/geo.hpp"
#include "natcat/hazard.hpp"
#include "natcat/rng.hpp"
#include "natcat/vulnerability.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <vector>

namespace natcat::synth {

Profile profile_from_string(const std::string& s) {
    if (s == "italy-like") return Profile::ItalyLike;
    if (s == "uniform") return Profile::Uniform;
    if (s == "fixture") return Profile::Fixture;
    throw InputError("unknown profile '" + s + "' (expected italy-like, uniform or fixture)");
}

namespace {

constexpr double kLatCentre = 42.0;
constexpr double kLonCentre = 12.0;

// Stream tags keep draws independent of generation order.
enum Stream : std::uint64_t {
    kStreamGeometry = 1,
    kStreamHazard = 2,
    kStreamExposure = 3,
    kStreamFlood = 4,
    kStreamCounts = 5,
    kStreamDepths = 6,
    kStreamNoise = 7,
};

std::uint64_t muni_stream(Stream tag, int index) {
    return (static_cast<std::uint64_t>(tag) << 32) + static_cast<std::uint64_t>(index);
}

struct Bundle {
    std::vector<geo::Municipality> munis;
    // id -> nine (pga, annual exceedance) points
    std::vector<std::pair<std::string, hazard::ExceedancePoint>> exceedance;
    std::vector<std::tuple<int, geo::FloodCluster, int>> counts;   // year, cluster, events
    std::vector<double> depths;
    std::map<geo::FloodCluster, double> mean_flooded;
};

void emit_exceedance_curve(Bundle& bundle, const std::string& id, double alpha, double beta,
                           rng::StreamRng* noise) {
    const auto h = hazard::PowerLawHazard::from_alpha_beta(alpha, beta);
    // Nine annual exceedance levels spanning the catalogue-style return periods.
    for (int i = 0; i < 9; ++i) {
        const double lambda = 4.0e-4 * std::pow(0.0332 / 4.0e-4, i / 8.0);
        double pga = h.quantile_from_exceedance(lambda);
        double prob = lambda;
        if (noise) prob *= std::exp(0.02 * noise->normal());
        bundle.exceedance.push_back({id, {pga, prob}});
    }
}

Bundle make_fixture() {
    Bundle b;
    // Five municipalities on one parallel; the first two conflict at r = 50 km.
    struct Row {
        const char* id;
        double east_km;
        geo::FloodCluster cluster;
        double p2, p3, amp, beta, pga_min;
        double m, rc_gl, rc_sl, a_gl, a_sl;      // seismic sqm (thousands)
        double s1, s2, s3;                       // storey sqm (thousands)
    };
    const Row rows[] = {
        {"F1", 0.0, geo::FloodCluster::AP1, 0.30, 0.20, 1.0, 2.5, 1.0e-3,
         200, 100, 40, 40, 20, 60, 200, 140},
        {"F2", 30.0, geo::FloodCluster::AP1, 0.40, 0.50, 1.2, 2.2, 5.0e-4,
         150, 80, 30, 30, 10, 50, 150, 100},
        {"F3", 65.0, geo::FloodCluster::None, 0.05, 0.00, 1.0, 3.0, 2.0e-3,
         120, 60, 20, 30, 10, 40, 120, 80},
        {"F4", 200.0, geo::FloodCluster::AP2, 0.70, 0.30, 1.5, 2.5, 1.5e-3,
         300, 150, 50, 60, 40, 90, 300, 210},
        {"F5", 400.0, geo::FloodCluster::None, 0.10, 0.00, 1.1, 2.8, 8.0e-4,
         100, 50, 20, 20, 10, 30, 100, 70},
    };
    const double km_per_lon = geo::kEarthRadiusKm * 0.017453292519943295 *
                              std::cos(kLatCentre * 0.017453292519943295);
    for (const auto& r : rows) {
        geo::Municipality m;
        m.id = r.id;
        m.name = std::string("Fixture-") + r.id;
        m.lat = kLatCentre;
        m.lon = kLonCentre + r.east_km / km_per_lon;
        m.cluster = r.cluster;
        m.p2_index = r.p2;
        m.p3_extent = r.p3;
        m.amplification = r.amp;
        m.exposures["M"] = r.m * 1e3;
        m.exposures["RC.gl"] = r.rc_gl * 1e3;
        m.exposures["RC.sl"] = r.rc_sl * 1e3;
        m.exposures["A.gl"] = r.a_gl * 1e3;
        m.exposures["A.sl"] = r.a_sl * 1e3;
        m.exposures["S1"] = r.s1 * 1e3;
        m.exposures["S2"] = r.s2 * 1e3;
        m.exposures["S3plus"] = r.s3 * 1e3;
        b.munis.push_back(std::move(m));
        const double alpha = (r.beta - 1.0) * std::pow(r.pga_min, r.beta - 1.0);
        emit_exceedance_curve(b, r.id, alpha, r.beta, nullptr);
    }
    // Fixed flood record: 20 years per cluster, hand-set counts and depths.
    const int ap1[] = {10, 14, 11, 12, 9, 15, 13, 12, 10, 14, 11, 12, 13, 12, 10, 14, 12, 11, 13, 12};
    const int ap2[] = {40, 45, 38, 44, 41, 46, 39, 43, 42, 44, 40, 45, 41, 43, 42, 44, 40, 42, 43, 44};
    for (int y = 0; y < 20; ++y) {
        b.counts.emplace_back(1990 + y, geo::FloodCluster::AP1, ap1[y]);
        b.counts.emplace_back(1990 + y, geo::FloodCluster::AP2, ap2[y]);
    }
    b.depths = {0.2, 0.3, 0.4, 0.5, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2,
                1.3, 1.5, 1.6, 1.8, 2.0, 2.2, 2.5, 2.8, 3.2, 3.6, 4.5, 5.5};
    b.mean_flooded[geo::FloodCluster::AP1] = 0.4;
    b.mean_flooded[geo::FloodCluster::AP2] = 0.3;
    return b;
}

Bundle make_random(const SynthConfig& cfg) {
    Bundle b;
    const bool italy = cfg.profile == Profile::ItalyLike;
    const int n = cfg.n_municipalities;
    const int grid = std::max(1, static_cast<int>(std::ceil(std::sqrt(double(n)))));
    const double spacing = cfg.spatial_extent_km / grid;
    const double km_per_lat = geo::kEarthRadiusKm * 0.017453292519943295;

    // Building-stock shares shaped like the national exposure mix (masonry
    // heavy) or flat for the uniform profile.
    const std::vector<std::pair<std::string, double>> seismic_shares =
        italy ? std::vector<std::pair<std::string, double>>{{"M", 0.5749},
                                                            {"RC.gl", 0.2352},
                                                            {"A.gl", 0.1159},
                                                            {"RC.sl", 0.0525},
                                                            {"A.sl", 0.0215}}
              : std::vector<std::pair<std::string, double>>{{"M", 0.2},
                                                            {"RC.gl", 0.2},
                                                            {"A.gl", 0.2},
                                                            {"RC.sl", 0.2},
                                                            {"A.sl", 0.2}};
    const std::vector<std::pair<std::string, double>> storey_shares =
        italy ? std::vector<std::pair<std::string, double>>{{"S1", 0.1709},
                                                            {"S2", 0.4908},
                                                            {"S3plus", 0.3383}}
              : std::vector<std::pair<std::string, double>>{
                    {"S1", 1.0 / 3}, {"S2", 1.0 / 3}, {"S3plus", 1.0 / 3}};

    for (int i = 0; i < n; ++i) {
        rng::StreamRng geom(cfg.seed, muni_stream(kStreamGeometry, i));
        rng::StreamRng haz(cfg.seed, muni_stream(kStreamHazard, i));
        rng::StreamRng expo(cfg.seed, muni_stream(kStreamExposure, i));
        rng::StreamRng flood(cfg.seed, muni_stream(kStreamFlood, i));

        geo::Municipality m;
        char idbuf[16];
        std::snprintf(idbuf, sizeof idbuf, "C%04d", i + 1);
        m.id = idbuf;
        m.name = std::string("Synth-") + idbuf;
        const int row = i / grid, col = i % grid;
        const double north = (row + 0.2 + 0.6 * geom.u01()) * spacing -
                             0.5 * cfg.spatial_extent_km;
        const double east = (col + 0.2 + 0.6 * geom.u01()) * spacing -
                            0.5 * cfg.spatial_extent_km;
        m.lat = kLatCentre + north / km_per_lat;
        const double km_per_lon = km_per_lat * std::cos(m.lat * 0.017453292519943295);
        m.lon = kLonCentre + east / km_per_lon;

        // Hazard: power law with pga_min in the catalogue-reported range. The
        // tail exponent controls the demand loading p_h / E[x]; this range
        // keeps the exposure-weighted loading below the supply multiplier, so
        // the market-failure regime c > 1 holds portfolio-wide.
        const double beta = haz.uniform(2.6, 3.6);
        const double pga_min = std::exp(haz.uniform(std::log(4.0e-4), std::log(2.0e-3)));
        const double alpha = (beta - 1.0) * std::pow(pga_min, beta - 1.0);
        m.amplification = haz.uniform(1.0, 1.6);

        // Exposure: one municipal stock split along both classifications.
        const double total_sqm = std::exp(expo.normal() * 1.0 + std::log(8.0e5));
        auto split = [&](const std::vector<std::pair<std::string, double>>& shares) {
            std::vector<double> jittered;
            double sum = 0.0;
            for (const auto& [_, s] : shares) {
                const double v = s * std::exp(0.25 * expo.normal());
                jittered.push_back(v);
                sum += v;
            }
            for (std::size_t k = 0; k < shares.size(); ++k)
                m.exposures[shares[k].first] = total_sqm * jittered[k] / sum;
        };
        split(seismic_shares);
        split(storey_shares);

        // Flood cluster membership from the hydrological index.
        m.p2_index = flood.u01();
        if (m.p2_index < 0.15) {
            m.cluster = geo::FloodCluster::None;
            m.p3_extent = 0.0;
        } else {
            m.cluster = m.p2_index < 0.5 ? geo::FloodCluster::AP1 : geo::FloodCluster::AP2;
            m.p3_extent = flood.uniform(0.02, 0.30);
        }
        b.munis.push_back(std::move(m));

        rng::StreamRng noise(cfg.seed, muni_stream(kStreamNoise, i));
        emit_exceedance_curve(b, b.munis.back().id, alpha, beta, cfg.noisy ? &noise : nullptr);
    }

    // Cluster frequency series shaped on the reported means (11.95 / 42.58).
    rng::StreamRng counts(cfg.seed, muni_stream(kStreamCounts, 0));
    const double mean_ap1 = 11.95, mean_ap2 = 42.58;
    for (int y = 0; y < 60; ++y) {
        b.counts.emplace_back(
            1960 + y, geo::FloodCluster::AP1,
            static_cast<int>(counts.negative_binomial(5.0, 5.0 / (5.0 + mean_ap1))));
        b.counts.emplace_back(
            1960 + y, geo::FloodCluster::AP2,
            static_cast<int>(counts.negative_binomial(6.0, 6.0 / (6.0 + mean_ap2))));
    }
    rng::StreamRng depths(cfg.seed, muni_stream(kStreamDepths, 0));
    for (int i = 0; i < 500; ++i) b.depths.push_back(depths.gamma(1.6, 1.1));

    int ap1_size = 0, ap2_size = 0;
    for (const auto& m : b.munis) {
        if (m.cluster == geo::FloodCluster::AP1) ++ap1_size;
        if (m.cluster == geo::FloodCluster::AP2) ++ap2_size;
    }
    b.mean_flooded[geo::FloodCluster::AP1] = std::max(1.0, 0.03 * ap1_size);
    b.mean_flooded[geo::FloodCluster::AP2] = std::max(1.0, 0.05 * ap2_size);
    return b;
}

void write_bundle(const Bundle& b, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    geo::write_municipalities_csv(dir / "municipalities.csv", b.munis);

    {
        csv::AtomicWriter w(dir / "exceedance.csv");
        csv::write_row(w.stream(), {"municipality_id", "pga", "exceedance_prob"});
        for (const auto& [id, pt] : b.exceedance)
            csv::write_row(w.stream(),
                           {id, csv::format_number(pt.pga), csv::format_number(pt.probability)});
        w.commit();
    }
    {
        csv::AtomicWriter w(dir / "flood_counts.csv");
        csv::write_row(w.stream(), {"year", "cluster", "n_events"});
        for (const auto& [year, cluster, events] : b.counts)
            csv::write_row(w.stream(), {std::to_string(year), geo::to_string(cluster),
                                        std::to_string(events)});
        w.commit();
    }
    {
        csv::AtomicWriter w(dir / "depths.csv");
        csv::write_row(w.stream(), {"event_id", "depth_m"});
        for (std::size_t i = 0; i < b.depths.size(); ++i)
            csv::write_row(w.stream(), {"E" + std::to_string(i + 1),
                                        csv::format_number(b.depths[i])});
        w.commit();
    }
    {
        csv::AtomicWriter w(dir / "clusters.csv");
        csv::write_row(w.stream(), {"cluster", "mean_flooded_munis"});
        for (const auto& [cluster, mean] : b.mean_flooded)
            csv::write_row(w.stream(), {geo::to_string(cluster), csv::format_number(mean)});
        w.commit();
    }
    {
        csv::AtomicWriter w(dir / "fragility_curves.txt");
        w.stream() << vuln::default_fragility_catalogue_text();
        w.commit();
    }
    {
        csv::AtomicWriter w(dir / "depth_damage.txt");
        w.stream() << vuln::default_depth_damage_text();
        w.commit();
    }
}

} // namespace

void generate_portfolio(const SynthConfig& config, const std::filesystem::path& out_dir) {
    if (config.n_municipalities < 1)
        throw InputError("generate_portfolio: need at least one municipality");
    const Bundle b =
        config.profile == Profile::Fixture ? make_fixture() : make_random(config);
    write_bundle(b, out_dir);
}

} // namespace natcat::synth
