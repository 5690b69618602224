#ifndef NATCAT_GEO_HPP
#define NATCAT_GEO_HPP

#include "natcat/par.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace natcat::geo {

inline constexpr double kEarthRadiusKm = 6371.0088;

enum class FloodCluster { None, AP1, AP2 };

std::string to_string(FloodCluster c);
FloodCluster cluster_from_string(const std::string& s);

// The closed typology vocabulary: five seismic classes plus three storey
// classes for flood exposure.
const std::vector<std::string>& seismic_typologies();
const std::vector<std::string>& flood_typologies();
bool is_known_typology(const std::string& t);

struct Municipality {
    std::string id;
    std::string name;
    double lat = 0.0;
    double lon = 0.0;
    FloodCluster cluster = FloodCluster::None;
    double p2_index = 0.0;
    double p3_extent = 0.0;       // fraction of municipal surface flooded (P3 scenario)
    double amplification = 1.0;   // S_S * S_T
    std::map<std::string, double> exposures;   // typology -> square metres

    double exposure(const std::string& typology) const {
        auto it = exposures.find(typology);
        return it == exposures.end() ? 0.0 : it->second;
    }

    void validate() const;   // throws InputError on violated field invariants
};

// Great-circle distance between centroids.
double distance_km(const Municipality& a, const Municipality& b);

struct GroupingSample {
    std::uint64_t seed = 0;
    std::vector<std::vector<std::size_t>> groups;   // indices into the municipality span
    std::vector<double> weights;                    // n_g / N
};

// Partition into groups whose members are pairwise at least r km apart:
// greedy colouring of the conflict graph (edge iff distance < r) in a
// seed-shuffled vertex order.
GroupingSample build_grouping(std::span<const Municipality> munis, double r_km,
                              std::uint64_t seed);

std::vector<GroupingSample> sample_groupings(std::span<const Municipality> munis, double r_km,
                                             int n_samples, std::uint64_t base_seed,
                                             par::Exec exec = par::default_exec());

std::vector<Municipality> load_municipalities_csv(const std::filesystem::path& path);
void write_municipalities_csv(const std::filesystem::path& path,
                              std::span<const Municipality> munis);

} // namespace natcat::geo

#endif
