#ifndef NATCAT_VULNERABILITY_HPP
#define NATCAT_VULNERABILITY_HPP

#include <array>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace natcat::vuln {

enum class Structure { Masonry, ReinforcedConcrete, Other };
enum class LoadClass { Gravity, Seismic };

struct LimitStateCurve {
    double mu = 0.0;      // natural log of PGA in g
    double sigma = 1.0;
};

// One catalogued fragility record: a literature model restricted to one load
// class, with one lognormal curve per limit state (last state = collapse).
struct FragilityModel {
    std::string id;
    Structure structure = Structure::Masonry;
    LoadClass load = LoadClass::Seismic;
    int declared_limit_states = 0;
    std::vector<LimitStateCurve> params;

    int n_limit_states() const { return static_cast<int>(params.size()); }
};

// P(LS | PGA) for 1 <= ls <= N; exactly zero for ls = N + 1.
double fragility_prob(const FragilityModel& m, int ls, double pga);

// P(LS | PGA) - P(LS+1 | PGA), floored at zero so the damage-state weights
// stay probabilities where curves cross in the tails.
double damage_state_prob(const FragilityModel& m, int ls, double pga);

// RC(LS)/RC = (ls / N)^alpha.
double damage_fraction(const FragilityModel& m, int ls, double alpha = 1.0);

struct CatalogueIssue {
    std::string model_id;
    std::string what;
};

struct FragilityCatalogue {
    std::vector<FragilityModel> models;
    std::vector<CatalogueIssue> load_report;

    // Models applicable to a seismic exposure typology (RC.gl, RC.sl, A.gl,
    // A.sl, M).
    std::vector<const FragilityModel*> models_for(const std::string& typology) const;
};

FragilityCatalogue load_fragility_catalogue(std::istream& in);
FragilityCatalogue load_fragility_catalogue_file(const std::filesystem::path& path);
const std::string& default_fragility_catalogue_text();

enum class StoreyClass { One, Two, ThreePlus };
std::string to_string(StoreyClass s);
StoreyClass storey_from_typology(const std::string& typology);   // S1 / S2 / S3plus

// Depth (m) to percent damage, cubic fit clamped to [0, 100]; identically 100
// from delta_max on.
struct DepthDamageCurve {
    StoreyClass storeys = StoreyClass::One;
    std::array<double, 4> coeffs{};   // c0 + c1 d + c2 d^2 + c3 d^3
    double delta_max = 1.0;
};

double depth_damage(const DepthDamageCurve& curve, double depth);
// Smallest depth with damage >= percent_target; delta_max at 100, 0 below the
// surface-damage intercept.
double invert_depth(const DepthDamageCurve& curve, double percent_target);

struct DepthDamageSet {
    std::vector<DepthDamageCurve> curves;
    const DepthDamageCurve& for_storeys(StoreyClass s) const;
};

DepthDamageSet load_depth_damage(std::istream& in);
DepthDamageSet load_depth_damage_file(const std::filesystem::path& path);
const std::string& default_depth_damage_text();

} // namespace natcat::vuln

#endif
