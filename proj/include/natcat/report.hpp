#ifndef NATCAT_REPORT_HPP
#define NATCAT_REPORT_HPP

#include "natcat/pipeline.hpp"
#include "natcat/portfolio.hpp"
#include "natcat/simulate.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace natcat::report {

// Per-municipality losses plus a summary in the style of the expected-loss
// tables (max per square metre with location, max municipal total, national
// total).
void write_loss_surface(const portfolio::Portfolio& p, const portfolio::LossSurface& surface,
                        const std::filesystem::path& csv_path,
                        const std::filesystem::path& summary_path);

// Scheme outputs: aggregate report (txt + csv), per-cell premiums, a
// choropleth-ready GeoJSON and the machine-readable solution consumed by the
// simulator.
void write_scheme_outputs(const portfolio::Portfolio& p, const pipeline::SchemeRun& run,
                          const std::filesystem::path& out_dir);

// Reloaded scheme solution; carries what the bound checker needs.
struct StoredSampling {
    double phi = 0.0;
    double gamma = 0.0;
    double phi_star = 0.0;
    double gamma_star = 0.0;
    double eps1_star = 0.0;
    double eps2_star = 0.0;
    portfolio::GroupSeverity groups;
};

struct StoredPolicy {
    double deductible = 0.0;
    double max_coverage = 0.0;
    double e_y = 0.0;
    portfolio::ClaimSeverity claims;
    std::vector<StoredSampling> samplings;
};

struct StoredScheme {
    std::string peril;
    double eps1 = 0.0;
    double eps2 = 0.0;
    std::uint64_t seed = 0;
    std::vector<StoredPolicy> policies;
};

StoredScheme read_scheme_json(const std::filesystem::path& path);

void write_simulation_report(const std::vector<simulate::SimulationReport>& reports,
                             const std::filesystem::path& csv_path,
                             const std::filesystem::path& text_path);

// Reproducibility manifest: tool name, subcommand, flags, seeds.
void write_manifest(const std::filesystem::path& path, const std::string& subcommand,
                    const std::vector<std::pair<std::string, std::string>>& entries);

} // namespace natcat::report

#endif
