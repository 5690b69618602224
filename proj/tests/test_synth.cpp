#include <doctest.h>

#include "natcat/errors.hpp"
#include "natcat/csv.hpp"
#include "natcat/pipeline.hpp"
#include "natcat/portfolio.hpp"
#include "natcat/synth.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

using namespace natcat;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const char* kBundleFiles[] = {"municipalities.csv", "exceedance.csv", "flood_counts.csv",
                              "depths.csv", "clusters.csv", "fragility_curves.txt",
                              "depth_damage.txt"};

} // namespace

TEST_CASE("generation is byte deterministic") {
    synth::SynthConfig cfg;
    cfg.n_municipalities = 40;
    cfg.seed = 7;
    const fs::path a = fs::temp_directory_path() / "natcat_synth_a";
    const fs::path b = fs::temp_directory_path() / "natcat_synth_b";
    synth::generate_portfolio(cfg, a);
    synth::generate_portfolio(cfg, b);
    for (const char* f : kBundleFiles) CHECK(slurp(a / f) == slurp(b / f));

    synth::SynthConfig other = cfg;
    other.seed = 8;
    const fs::path c = fs::temp_directory_path() / "natcat_synth_c";
    synth::generate_portfolio(other, c);
    CHECK(slurp(a / "municipalities.csv") != slurp(c / "municipalities.csv"));

    CHECK_THROWS_AS(synth::generate_portfolio(synth::SynthConfig{0}, a), InputError);
}

TEST_CASE("fixture bundle") {
    synth::SynthConfig cfg;
    cfg.profile = synth::Profile::Fixture;
    const fs::path dir = fs::temp_directory_path() / "natcat_synth_fixture";
    synth::generate_portfolio(cfg, dir);
    const auto p = portfolio::load_portfolio(dir);
    REQUIRE(p.munis.size() == 5);

    // The noiseless nine-point curves reproduce the generator parameters.
    const std::map<std::string, std::pair<double, double>> truth{
        {"F1", {2.5, 1.0e-3}}, {"F2", {2.2, 5.0e-4}}, {"F3", {3.0, 2.0e-3}},
        {"F4", {2.5, 1.5e-3}}, {"F5", {2.8, 8.0e-4}}};
    for (const auto& [id, bp] : truth) {
        const auto& h = p.seismic_hazard.at(id);
        CHECK(h.beta == doctest::Approx(bp.first).epsilon(1e-9));
        CHECK(h.pga_min == doctest::Approx(bp.second).epsilon(1e-9));
    }

    // Flood side: two clusters with the hand-set mean counts.
    REQUIRE(p.flood_frequency.count(geo::FloodCluster::AP1) == 1);
    REQUIRE(p.flood_frequency.count(geo::FloodCluster::AP2) == 1);
    const auto& ap1 = p.flood_frequency.at(geo::FloodCluster::AP1);
    CHECK(ap1.mean() == doctest::Approx(12.0).epsilon(0.01));
    CHECK(ap1.cluster_size == 2);
    CHECK(ap1.mean_flooded_munis == doctest::Approx(0.4));
    CHECK(p.depth.has_value());

    // Universe filters per peril.
    CHECK(portfolio::peril_universe(p, loss::Peril::Seismic).size() == 5);
    CHECK(portfolio::peril_universe(p, loss::Peril::Flood).size() == 3);
    CHECK(portfolio::peril_universe(p, loss::Peril::Multi).size() == 3);
}

TEST_CASE("italy-like bundle shape") {
    synth::SynthConfig cfg;
    cfg.n_municipalities = 60;
    cfg.seed = 5;
    const fs::path dir = fs::temp_directory_path() / "natcat_synth_italy";
    synth::generate_portfolio(cfg, dir);
    const auto p = portfolio::load_portfolio(dir);
    REQUIRE(p.munis.size() == 60);

    double masonry = 0.0, rc_total = 0.0, seismic_total = 0.0, storey_total = 0.0;
    for (const auto& m : p.munis) {
        masonry += m.exposure("M");
        rc_total += m.exposure("RC.gl") + m.exposure("RC.sl");
        double s_sum = 0.0, f_sum = 0.0;
        for (const auto& t : geo::seismic_typologies()) s_sum += m.exposure(t);
        for (const auto& t : geo::flood_typologies()) f_sum += m.exposure(t);
        // Both classifications describe the same stock.
        CHECK(s_sum == doctest::Approx(f_sum).epsilon(1e-9));
        seismic_total += s_sum;
        storey_total += f_sum;
        CHECK(m.amplification >= 1.0);
        const auto& h = p.seismic_hazard.at(m.id);
        CHECK(h.beta > 1.5);
        CHECK(h.beta < 4.0);
    }
    CHECK(masonry > rc_total);   // masonry-heavy mix
    CHECK(seismic_total == doctest::Approx(storey_total).epsilon(1e-9));

    // Noiseless fits recover the generator exactly, so refitting the written
    // nine-point curves round-trips (checked through the loaded hazards: the
    // exceedance at each written point matches the fitted curve).
    const auto table = csv::Table::read_file(dir / "exceedance.csv");
    for (std::size_t r = 0; r < table.rows(); ++r) {
        const auto& h = p.seismic_hazard.at(table.cell(r, "municipality_id"));
        CHECK(h.exceedance(table.number(r, "pga")) ==
              doctest::Approx(table.number(r, "exceedance_prob")).epsilon(1e-9));
    }
}

TEST_CASE("fixture golden values") {
    // Frozen outputs of the hand-set fixture, cross-validated against the
    // Monte-Carlo and enumeration oracles when first computed. Guards the
    // whole pipeline against numerical drift.
    synth::SynthConfig cfg;
    cfg.profile = synth::Profile::Fixture;
    const fs::path dir = fs::temp_directory_path() / "natcat_synth_golden";
    synth::generate_portfolio(cfg, dir);
    const auto p = portfolio::load_portfolio(dir);

    const auto seismic = portfolio::compute_loss_surface(p, loss::Peril::Seismic);
    const auto flood = portfolio::compute_loss_surface(p, loss::Peril::Flood);
    CHECK(seismic.national_total == doctest::Approx(7.6103718080e5).epsilon(1e-9));
    CHECK(flood.national_total == doctest::Approx(4.6563072515e7).epsilon(1e-9));

    pipeline::SchemeConfig sc;
    sc.peril = loss::Peril::Seismic;
    sc.samplings = 4;
    sc.seed = 42;
    const auto run = pipeline::run_scheme(p, sc);
    CHECK(run.policies[0].sum_p_h == doctest::Approx(1.7754129630e6).epsilon(1e-9));
    CHECK(run.policies[0].solution.w_d_star.mean ==
          doctest::Approx(4.6405225590e5).epsilon(1e-9));
    // Full coverage pays the loss itself, so expected claims equal the
    // expected-loss total.
    CHECK(run.policies[0].e_y == doctest::Approx(seismic.national_total).epsilon(1e-12));

    // Without flooded surface there is no flood loss at all.
    portfolio::Portfolio dry = p;
    for (auto& m : dry.munis) m.p3_extent = 0.0;
    CHECK(portfolio::compute_loss_surface(dry, loss::Peril::Flood).national_total == 0.0);
}

TEST_CASE("noisy mode still fits within tolerance") {
    synth::SynthConfig cfg;
    cfg.n_municipalities = 20;
    cfg.seed = 9;
    cfg.noisy = true;
    const fs::path dir = fs::temp_directory_path() / "natcat_synth_noisy";
    synth::generate_portfolio(cfg, dir);
    const auto p = portfolio::load_portfolio(dir);
    for (const auto& m : p.munis) {
        const auto& h = p.seismic_hazard.at(m.id);
        CHECK(h.beta > 1.0);
        CHECK(h.pga_min > 0.0);
        CHECK(h.pga_min < 0.01);
    }
}
