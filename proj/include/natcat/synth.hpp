#ifndef NATCAT_SYNTH_HPP
#define NATCAT_SYNTH_HPP

#include <cstdint>
#include <filesystem>
#include <string>

namespace natcat::synth {

enum class Profile { ItalyLike, Uniform, Fixture };

Profile profile_from_string(const std::string& s);

struct SynthConfig {
    int n_municipalities = 200;
    double spatial_extent_km = 800.0;
    std::uint64_t seed = 42;
    Profile profile = Profile::ItalyLike;
    bool noisy = false;   // multiplicative noise on the exceedance points
};

// Writes a complete input bundle into out_dir: municipalities.csv,
// exceedance.csv, flood_counts.csv, depths.csv, clusters.csv plus the
// vulnerability assets. Deterministic: same config, same bytes.
void generate_portfolio(const SynthConfig& config, const std::filesystem::path& out_dir);

} // namespace natcat::synth

#endif
