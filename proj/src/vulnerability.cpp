#include "natcat/vulnerability.hpp"
#include "natcat/errors.hpp"
#include "natcat/num.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace natcat::vuln {

double fragility_prob(const FragilityModel& m, int ls, double pga) {
    const int n = m.n_limit_states();
    if (ls < 1 || ls > n + 1)
        throw InputError("fragility_prob: limit state " + std::to_string(ls) +
                         " out of range for model " + m.id);
    if (pga <= 0.0) throw InputError("fragility_prob: pga must be positive");
    if (ls == n + 1) return 0.0;
    const auto& c = m.params[ls - 1];
    return num::normal_cdf((std::log(pga) - c.mu) / c.sigma);
}

double damage_state_prob(const FragilityModel& m, int ls, double pga) {
    return std::max(0.0, fragility_prob(m, ls, pga) - fragility_prob(m, ls + 1, pga));
}

double damage_fraction(const FragilityModel& m, int ls, double alpha) {
    return std::pow(static_cast<double>(ls) / m.n_limit_states(), alpha);
}

namespace {

Structure structure_from_string(const std::string& s) {
    if (s == "M") return Structure::Masonry;
    if (s == "RC") return Structure::ReinforcedConcrete;
    if (s == "A") return Structure::Other;
    throw InputError("fragility catalogue: unknown structure '" + s + "'");
}

LoadClass load_from_string(const std::string& s) {
    if (s == "gravity") return LoadClass::Gravity;
    if (s == "seismic") return LoadClass::Seismic;
    throw InputError("fragility catalogue: unknown load class '" + s + "'");
}

std::string value_after(const std::string& token, const std::string& key) {
    if (token.rfind(key + "=", 0) != 0)
        throw InputError("fragility catalogue: expected '" + key + "=...', got '" + token + "'");
    return token.substr(key.size() + 1);
}

} // namespace

FragilityCatalogue load_fragility_catalogue(std::istream& in) {
    FragilityCatalogue cat;
    std::string line;
    FragilityModel current;
    bool open = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first[0] == '#') continue;
        if (first == "model") {
            if (open) throw InputError("fragility catalogue: 'model' before 'end'");
            std::string id, structure, load, nls;
            if (!(ls >> id >> structure >> load >> nls))
                throw InputError("fragility catalogue: malformed model line: " + line);
            current = FragilityModel{};
            current.id = id;
            current.structure = structure_from_string(value_after(structure, "structure"));
            current.load = load_from_string(value_after(load, "load"));
            current.declared_limit_states = std::stoi(value_after(nls, "nls"));
            open = true;
        } else if (first == "end") {
            if (!open) throw InputError("fragility catalogue: stray 'end'");
            if (current.params.empty())
                throw InputError("fragility catalogue: model " + current.id + " has no curves");
            for (const auto& c : current.params)
                if (c.sigma <= 0.0)
                    throw InputError("fragility catalogue: model " + current.id +
                                     " has non-positive sigma");
            if (current.n_limit_states() != current.declared_limit_states)
                cat.load_report.push_back(
                    {current.id + "/" + (current.load == LoadClass::Gravity ? "gl" : "sl"),
                     "declared " + std::to_string(current.declared_limit_states) +
                         " limit states but lists " + std::to_string(current.n_limit_states()) +
                         " parameter rows; rows taken as authoritative"});
            // Curves may cross far in the tails; note where ordering breaks so
            // the clamped damage-state weights are traceable to the source.
            for (int s = 1; s < current.n_limit_states(); ++s) {
                for (double t = -4.0; t <= 2.0; t += 0.05) {
                    const double pga = std::exp(t);
                    if (fragility_prob(current, s, pga) <
                        fragility_prob(current, s + 1, pga) - 1e-12) {
                        cat.load_report.push_back(
                            {current.id + "/" + (current.load == LoadClass::Gravity ? "gl" : "sl"),
                             "limit states " + std::to_string(s) + "," + std::to_string(s + 1) +
                                 " cross near pga " + std::to_string(pga) + " g"});
                        break;
                    }
                }
            }
            cat.models.push_back(current);
            open = false;
        } else {
            if (!open) throw InputError("fragility catalogue: parameters outside a model block");
            LimitStateCurve c;
            c.mu = std::stod(first);
            if (!(ls >> c.sigma))
                throw InputError("fragility catalogue: missing sigma in line: " + line);
            current.params.push_back(c);
        }
    }
    if (open) throw InputError("fragility catalogue: unterminated model block");
    if (cat.models.empty()) throw InputError("fragility catalogue: no models");
    return cat;
}

FragilityCatalogue load_fragility_catalogue_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return load_fragility_catalogue(in);
}

std::vector<const FragilityModel*> FragilityCatalogue::models_for(
    const std::string& typology) const {
    Structure st;
    LoadClass lc;
    if (typology == "M") {
        st = Structure::Masonry;
        lc = LoadClass::Seismic;
    } else if (typology == "RC.gl") {
        st = Structure::ReinforcedConcrete;
        lc = LoadClass::Gravity;
    } else if (typology == "RC.sl") {
        st = Structure::ReinforcedConcrete;
        lc = LoadClass::Seismic;
    } else if (typology == "A.gl") {
        st = Structure::Other;
        lc = LoadClass::Gravity;
    } else if (typology == "A.sl") {
        st = Structure::Other;
        lc = LoadClass::Seismic;
    } else {
        throw InputError("no fragility mapping for typology '" + typology + "'");
    }
    std::vector<const FragilityModel*> out;
    for (const auto& m : models)
        if (m.structure == st && m.load == lc) out.push_back(&m);
    if (out.empty()) throw InputError("catalogue has no models for typology '" + typology + "'");
    return out;
}

std::string to_string(StoreyClass s) {
    switch (s) {
        case StoreyClass::One: return "1";
        case StoreyClass::Two: return "2";
        default: return "3plus";
    }
}

StoreyClass storey_from_typology(const std::string& typology) {
    if (typology == "S1") return StoreyClass::One;
    if (typology == "S2") return StoreyClass::Two;
    if (typology == "S3plus") return StoreyClass::ThreePlus;
    throw InputError("no storey class for typology '" + typology + "'");
}

double depth_damage(const DepthDamageCurve& curve, double depth) {
    if (depth < 0.0) throw InputError("depth_damage: negative depth");
    if (depth >= curve.delta_max) return 100.0;
    const auto& c = curve.coeffs;
    const double raw = c[0] + depth * (c[1] + depth * (c[2] + depth * c[3]));
    return std::clamp(raw, 0.0, 100.0);
}

double invert_depth(const DepthDamageCurve& curve, double percent_target) {
    if (percent_target < 0.0 || percent_target > 100.0)
        throw InputError("invert_depth: target outside [0,100]");
    if (percent_target >= 100.0) return curve.delta_max;
    if (depth_damage(curve, 0.0) >= percent_target) return 0.0;
    double lo = 0.0, hi = curve.delta_max;
    while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (depth_damage(curve, mid) >= percent_target)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

const DepthDamageCurve& DepthDamageSet::for_storeys(StoreyClass s) const {
    for (const auto& c : curves)
        if (c.storeys == s) return c;
    throw InputError("depth-damage set lacks storey class " + to_string(s));
}

DepthDamageSet load_depth_damage(std::istream& in) {
    DepthDamageSet set;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string first;
        if (!(ls >> first) || first[0] == '#') continue;
        if (first != "curve")
            throw InputError("depth-damage file: expected 'curve', got '" + first + "'");
        std::string storeys, dmax, coeffs;
        if (!(ls >> storeys >> dmax >> coeffs))
            throw InputError("depth-damage file: malformed line: " + line);
        DepthDamageCurve c;
        const std::string sv = value_after(storeys, "storeys");
        if (sv == "1")
            c.storeys = StoreyClass::One;
        else if (sv == "2")
            c.storeys = StoreyClass::Two;
        else if (sv == "3plus")
            c.storeys = StoreyClass::ThreePlus;
        else
            throw InputError("depth-damage file: unknown storey class '" + sv + "'");
        c.delta_max = std::stod(value_after(dmax, "delta_max"));
        std::istringstream cs(value_after(coeffs, "coeffs"));
        std::string tok;
        std::size_t i = 0;
        while (std::getline(cs, tok, ',')) {
            if (i >= c.coeffs.size())
                throw InputError("depth-damage file: more than 4 coefficients");
            c.coeffs[i++] = std::stod(tok);
        }
        if (c.delta_max <= 0.0) throw InputError("depth-damage file: delta_max must be positive");
        // Monotonicity on [0, delta_max): raw cubics must not dip.
        double prev = depth_damage(c, 0.0);
        for (int k = 1; k <= 400; ++k) {
            const double d = c.delta_max * k / 401.0;
            const double v = depth_damage(c, d);
            if (v < prev - 1e-9)
                throw InputError("depth-damage file: curve for storeys " + sv +
                                 " is not monotone");
            prev = v;
        }
        set.curves.push_back(c);
    }
    if (set.curves.empty()) throw InputError("depth-damage file: no curves");
    return set;
}

DepthDamageSet load_depth_damage_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path.string());
    return load_depth_damage(in);
}

} // namespace natcat::vuln
