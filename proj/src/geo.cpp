#include "natcat/geo.hpp"
#include "natcat/csv.hpp"
#include "natcat/errors.hpp"
#include "natcat/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace natcat::geo {

std::string to_string(FloodCluster c) {
    switch (c) {
        case FloodCluster::AP1: return "A_P1";
        case FloodCluster::AP2: return "A_P2";
        default: return "none";
    }
}

FloodCluster cluster_from_string(const std::string& s) {
    if (s == "A_P1") return FloodCluster::AP1;
    if (s == "A_P2") return FloodCluster::AP2;
    if (s == "none" || s.empty()) return FloodCluster::None;
    throw InputError("unknown flood cluster tag '" + s + "'");
}

const std::vector<std::string>& seismic_typologies() {
    static const std::vector<std::string> v{"RC.gl", "RC.sl", "A.gl", "A.sl", "M"};
    return v;
}

const std::vector<std::string>& flood_typologies() {
    static const std::vector<std::string> v{"S1", "S2", "S3plus"};
    return v;
}

bool is_known_typology(const std::string& t) {
    const auto& s = seismic_typologies();
    const auto& f = flood_typologies();
    return std::find(s.begin(), s.end(), t) != s.end() ||
           std::find(f.begin(), f.end(), t) != f.end();
}

void Municipality::validate() const {
    if (lat < -90.0 || lat > 90.0 || lon < -180.0 || lon > 180.0)
        throw InputError("municipality " + id + ": coordinates out of range");
    if (p2_index < 0.0 || p2_index > 1.0)
        throw InputError("municipality " + id + ": p2 index outside [0,1]");
    if (p3_extent < 0.0 || p3_extent > 1.0)
        throw InputError("municipality " + id + ": p3 extent outside [0,1]");
    if (amplification < 0.0)
        throw InputError("municipality " + id + ": negative amplification");
    for (const auto& [typ, sqm] : exposures) {
        if (!is_known_typology(typ))
            throw InputError("municipality " + id + ": unknown typology '" + typ + "'");
        if (sqm < 0.0)
            throw InputError("municipality " + id + ": negative exposure for " + typ);
    }
}

double distance_km(const Municipality& a, const Municipality& b) {
    a.validate();
    b.validate();
    constexpr double deg = 0.017453292519943295;
    const double phi1 = a.lat * deg, phi2 = b.lat * deg;
    const double dphi = (b.lat - a.lat) * deg;
    const double dlam = (b.lon - a.lon) * deg;
    const double s = std::sin(0.5 * dphi), t = std::sin(0.5 * dlam);
    const double h = s * s + std::cos(phi1) * std::cos(phi2) * t * t;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

namespace {

// Adjacency lists of the conflict graph: edge iff centroids closer than r.
std::vector<std::vector<std::size_t>> conflict_graph(std::span<const Municipality> munis,
                                                     double r_km) {
    const std::size_t n = munis.size();
    std::vector<std::vector<std::size_t>> adj(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (distance_km(munis[i], munis[j]) < r_km) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
    return adj;
}

GroupingSample colour(std::span<const Municipality> munis,
                      const std::vector<std::vector<std::size_t>>& adj,
                      std::uint64_t seed) {
    const std::size_t n = munis.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    rng::StreamRng r(seed);
    for (std::size_t i = n; i > 1; --i)   // Fisher-Yates
        std::swap(order[i - 1], order[r.uniform_index(i)]);

    std::vector<int> colour_of(n, -1);
    int n_colours = 0;
    std::vector<char> used;
    for (std::size_t v : order) {
        used.assign(n_colours, 0);
        for (std::size_t u : adj[v])
            if (colour_of[u] >= 0) used[colour_of[u]] = 1;
        int c = 0;
        while (c < n_colours && used[c]) ++c;
        if (c == n_colours) ++n_colours;
        colour_of[v] = c;
    }

    GroupingSample sample;
    sample.seed = seed;
    sample.groups.resize(n_colours);
    for (std::size_t v = 0; v < n; ++v) sample.groups[colour_of[v]].push_back(v);
    sample.weights.reserve(n_colours);
    for (const auto& g : sample.groups)
        sample.weights.push_back(static_cast<double>(g.size()) / static_cast<double>(n));
    return sample;
}

} // namespace

GroupingSample build_grouping(std::span<const Municipality> munis, double r_km,
                              std::uint64_t seed) {
    if (munis.empty()) throw InputError("build_grouping: no municipalities");
    if (r_km <= 0.0) throw InputError("build_grouping: r must be positive");
    return colour(munis, conflict_graph(munis, r_km), seed);
}

std::vector<GroupingSample> sample_groupings(std::span<const Municipality> munis, double r_km,
                                             int n_samples, std::uint64_t base_seed,
                                             par::Exec exec) {
    if (n_samples < 1) throw InputError("sample_groupings: need at least one sample");
    if (munis.empty()) throw InputError("sample_groupings: no municipalities");
    if (r_km <= 0.0) throw InputError("sample_groupings: r must be positive");
    const auto adj = conflict_graph(munis, r_km);
    std::vector<GroupingSample> samples(n_samples);
    par::for_each_index(static_cast<std::size_t>(n_samples), [&](std::size_t i) {
        samples[i] = colour(munis, adj, rng::derive_seed(base_seed, i));
    }, exec);
    return samples;
}

std::vector<Municipality> load_municipalities_csv(const std::filesystem::path& path) {
    const auto table = csv::Table::read_file(path);
    for (const char* col : {"id", "name", "lat", "lon", "cluster", "p2", "p3_ext", "amplification"})
        if (!table.has_column(col))
            throw InputError(path.string() + ": missing column '" + std::string(col) + "'");

    std::vector<std::string> exposure_cols;
    for (const auto& col : table.header())
        if (is_known_typology(col)) exposure_cols.push_back(col);

    std::vector<Municipality> munis;
    munis.reserve(table.rows());
    for (std::size_t r = 0; r < table.rows(); ++r) {
        Municipality m;
        m.id = table.cell(r, "id");
        m.name = table.cell(r, "name");
        m.lat = table.number(r, "lat");
        m.lon = table.number(r, "lon");
        m.cluster = cluster_from_string(table.cell(r, "cluster"));
        m.p2_index = table.number(r, "p2");
        m.p3_extent = table.number(r, "p3_ext");
        m.amplification = table.number(r, "amplification");
        for (const auto& col : exposure_cols) {
            const double sqm = table.number(r, col);
            if (sqm != 0.0) m.exposures[col] = sqm;
        }
        try {
            m.validate();
        } catch (const InputError& e) {
            throw InputError(path.string() + " row " + std::to_string(table.file_row(r)) +
                             ": " + e.what());
        }
        munis.push_back(std::move(m));
    }
    return munis;
}

void write_municipalities_csv(const std::filesystem::path& path,
                              std::span<const Municipality> munis) {
    csv::AtomicWriter w(path);
    std::vector<std::string> header{"id", "name", "lat", "lon", "cluster",
                                    "p2", "p3_ext", "amplification"};
    for (const auto& t : seismic_typologies()) header.push_back(t);
    for (const auto& t : flood_typologies()) header.push_back(t);
    csv::write_row(w.stream(), header);
    for (const auto& m : munis) {
        std::vector<std::string> row{m.id, m.name, csv::format_number(m.lat),
                                     csv::format_number(m.lon), to_string(m.cluster),
                                     csv::format_number(m.p2_index),
                                     csv::format_number(m.p3_extent),
                                     csv::format_number(m.amplification)};
        for (const auto& t : seismic_typologies()) row.push_back(csv::format_number(m.exposure(t)));
        for (const auto& t : flood_typologies()) row.push_back(csv::format_number(m.exposure(t)));
        csv::write_row(w.stream(), row);
    }
    w.commit();
}

} // namespace natcat::geo
