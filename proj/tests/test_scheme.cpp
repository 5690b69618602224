#include <doctest.h>

#include "natcat/errors.hpp"
#include "natcat/pipeline.hpp"
#include "natcat/portfolio.hpp"
#include "natcat/scheme.hpp"
#include "natcat/synth.hpp"

#include <cmath>
#include <filesystem>

using namespace natcat;

namespace {

// Hand-made group structure: one group per municipality given (a, q).
struct ToySetup {
    portfolio::ClaimSeverity claims;
    geo::GroupingSample grouping;
    portfolio::GroupSeverity groups;
};

ToySetup toy(const std::vector<double>& a, const std::vector<double>& q,
             const std::vector<std::vector<std::size_t>>& group_members) {
    ToySetup t;
    t.claims.universe.resize(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) t.claims.universe[i] = i;
    t.claims.a = a;
    t.claims.q = q;
    for (std::size_t i = 0; i < a.size(); ++i) t.claims.expected_total += a[i] * q[i];
    t.grouping.groups = group_members;
    for (const auto& g : group_members)
        t.grouping.weights.push_back(static_cast<double>(g.size()) /
                                     static_cast<double>(a.size()));
    t.groups = portfolio::group_severity(t.claims, t.grouping);
    return t;
}

} // namespace

TEST_CASE("phi solve on a single unit") {
    const auto t = toy({1.0}, {0.5}, {{0}});
    const scheme::TailBound bound(t.groups, scheme::BoundMode::SimplifiedBernoulli);
    // One group, n = b = 1: bound(phi) = exp(-2 phi^2); at phi = 0.5 it is
    // exp(-1/2).
    const double eps = std::exp(-0.5);
    CHECK(bound.evaluate(0.5) == doctest::Approx(eps).epsilon(1e-12));
    CHECK(bound.solve(eps) == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("phi symmetry and homogeneity") {
    const auto one = toy({1.0, 1.0}, {0.5, 0.5}, {{0, 1}});
    const auto two = toy({1.0, 1.0, 1.0, 1.0}, {0.5, 0.5, 0.5, 0.5}, {{0, 1}, {2, 3}});
    const scheme::TailBound b1(one.groups, scheme::BoundMode::SimplifiedBernoulli);
    const scheme::TailBound b2(two.groups, scheme::BoundMode::SimplifiedBernoulli);
    CHECK(b1.solve(0.01) == doctest::Approx(b2.solve(0.01)).epsilon(1e-9));

    const auto doubled = toy({2.0, 2.0}, {0.5, 0.5}, {{0, 1}});
    const scheme::TailBound b3(doubled.groups, scheme::BoundMode::SimplifiedBernoulli);
    CHECK(b3.solve(0.01) == doctest::Approx(2.0 * b1.solve(0.01)).epsilon(1e-9));
}

TEST_CASE("gamma solve") {
    const auto t = toy({1.0}, {0.5}, {{0}});
    const scheme::TailBound bound(t.groups, scheme::BoundMode::SimplifiedBernoulli);
    const double phi = bound.solve(0.01);
    CHECK(bound.solve(0.01) == doctest::Approx(phi));
    const double gamma = bound.solve(0.02);
    CHECK(gamma < phi);
    // Closed form: gamma = sqrt(ln(1/eps2)/2) for n = b = 1.
    CHECK(gamma == doctest::Approx(std::sqrt(std::log(1.0 / 0.02) / 2.0)).epsilon(1e-8));
    // Bound is monotone decreasing in the margin.
    double prev = 1.0;
    for (double m : {0.1, 0.3, 0.7, 1.2, 2.0}) {
        const double v = bound.evaluate(m);
        CHECK(v <= prev + 1e-15);
        prev = v;
    }
}

TEST_CASE("reconcile demand and supply") {
    {
        const auto [c, sum] = scheme::reconcile(5.0, 0.0, 10.0, 1.0);   // sum_p_g = 10
        CHECK(c == doctest::Approx(2.0));
        CHECK(sum == doctest::Approx(5.0));
    }
    {
        const auto [c, sum] = scheme::reconcile(5.0, 0.0, 4.0, 1.0);    // sum_p_g = 4
        CHECK(c == doctest::Approx(0.8));
        CHECK(sum == doctest::Approx(4.0));
    }
    {
        // Three-municipality recomputation straight from the definitions.
        const auto t = toy({2.0, 3.0, 1.0}, {0.1, 0.2, 0.3}, {{0, 1}, {2}});
        const scheme::TailBound bound(t.groups, scheme::BoundMode::SimplifiedBernoulli);
        const double gamma = bound.solve(0.02);
        const double e_y = 2.0 * 0.1 + 3.0 * 0.2 + 1.0 * 0.3;
        const double sum_p_g = 3.0 * gamma + e_y;
        const auto [c, sum] = scheme::reconcile(1.5, gamma, e_y, 3.0);
        CHECK(c == doctest::Approx(sum_p_g / 1.5).epsilon(1e-12));
        CHECK(sum == doctest::Approx(std::min(c, 1.0) * 1.5).epsilon(1e-12));
    }
    {
        const auto [c, sum] = scheme::reconcile(0.0, 1.0, 1.0, 3.0);
        CHECK(std::isinf(c));
        CHECK(sum == 0.0);
    }
}

TEST_CASE("scheme solution regimes") {
    const auto t = toy({1.0}, {0.5}, {{0}});
    const scheme::TailBound bound(t.groups, scheme::BoundMode::SimplifiedBernoulli);

    SUBCASE("demand-capped (c > 1)") {
        const auto s = scheme::solve_scheme(bound, 0.6, 0.01, 0.02);
        CHECK(s.c > 1.0);
        CHECK(s.sum_p_star == doctest::Approx(0.6));
        CHECK(s.eps1_star == doctest::Approx(0.01).epsilon(1e-9));
        CHECK(s.eps2_star > 0.02);
        // gamma* = (0.6 - 0.5) / 1 and eps2* = exp(-2 gamma*^2).
        CHECK(s.gamma_star == doctest::Approx(0.1).epsilon(1e-12));
        CHECK(s.eps2_star == doctest::Approx(std::exp(-0.02)).epsilon(1e-12));
        CHECK(s.w_d_star ==
              doctest::Approx(s.n_municipalities * (s.phi_star - s.gamma_star)).epsilon(1e-9));
    }

    SUBCASE("supply-capped (c < 1) meets both targets exactly") {
        const auto s = scheme::solve_scheme(bound, 100.0, 0.01, 0.02);
        CHECK(s.c < 1.0);
        CHECK(s.sum_p_star == doctest::Approx(s.sum_p_g).epsilon(1e-12));
        CHECK(s.eps1_star == doctest::Approx(0.01).epsilon(1e-9));
        CHECK(s.eps2_star == doctest::Approx(0.02).epsilon(1e-9));
        CHECK(s.w_d_star ==
              doctest::Approx(s.n_municipalities * (s.phi - s.gamma)).epsilon(1e-9));
    }

    SUBCASE("premium pool below expected claims is vacuous") {
        const auto s = scheme::solve_scheme(bound, 0.3, 0.01, 0.02);
        CHECK(s.gamma_star < 0.0);
        CHECK(s.vacuous_eps2);
        CHECK(s.eps2_star == 1.0);
    }

    CHECK_THROWS_AS(scheme::solve_scheme(bound, 1.0, 0.02, 0.01), InputError);
}

TEST_CASE("generic mgf mode") {
    const auto t = toy({2.0, 1.0, 3.0}, {0.1, 0.3, 0.05}, {{0, 1}, {2}});
    const scheme::TailBound simplified(t.groups, scheme::BoundMode::SimplifiedBernoulli);
    const scheme::TailBound generic(t.groups, scheme::BoundMode::GenericMgf, &t.grouping,
                                    &t.claims);

    // The simplified form comes from bounding the exact mgf, so the optimized
    // generic margin never exceeds it beyond the h-grid resolution.
    const double phi_s = simplified.solve(0.01);
    const double phi_g = generic.solve(0.01);
    CHECK(phi_g <= phi_s * 1.05);

    // Degenerate Bernoulli(1) claims: the sum is deterministic and the exact
    // mgf drives the margin to almost nothing, unlike the simplified bound.
    const auto det = toy({1.0, 1.0}, {1.0, 1.0}, {{0, 1}});
    const scheme::TailBound det_s(det.groups, scheme::BoundMode::SimplifiedBernoulli);
    const scheme::TailBound det_g(det.groups, scheme::BoundMode::GenericMgf, &det.grouping,
                                  &det.claims);
    CHECK(det_g.solve(0.01) < 0.05 * det_s.solve(0.01));

    // With one shared h, W_d* = (N/h) log(eps2*/eps1*) is an identity.
    const double h = 1.3;
    const double phi_star = 0.8, gamma_star = 0.55;
    const double eps1 = generic.evaluate_generic_at_h(phi_star, h);
    const double eps2 = generic.evaluate_generic_at_h(gamma_star, h);
    CHECK(3.0 / h * std::log(eps2 / eps1) ==
          doctest::Approx(3.0 * (phi_star - gamma_star)).epsilon(1e-9));
}

TEST_CASE("aggregation over samplings") {
    scheme::SchemeSolution a, b;
    a.w_d_star = 8.0;
    b.w_d_star = 12.0;
    a.sum_p_star = b.sum_p_star = 5.0;
    const auto agg = scheme::aggregate_over_samplings({a, b});
    CHECK(agg.w_d_star.mean == doctest::Approx(10.0));
    CHECK(agg.w_d_star.cov == doctest::Approx(0.2));
    CHECK(agg.sum_p_star.cov == 0.0);

    const auto same = scheme::aggregate_over_samplings({a, a, a});
    CHECK(same.w_d_star.cov == 0.0);
    CHECK(same.eps1_star.cov == 0.0);
}

TEST_CASE("multi-hazard severity aggregation") {
    const auto seismic = toy({2.0, 3.0}, {0.5, 0.2}, {{0}, {1}});
    portfolio::ClaimSeverity flood_zero = seismic.claims;
    flood_zero.a = {0.0, 0.0};
    flood_zero.q = {0.0, 0.0};
    flood_zero.expected_total = 0.0;

    portfolio::MultiHazardSeverity mh{seismic.claims, flood_zero};
    const auto mh_groups = portfolio::group_severity_multi(mh, seismic.grouping);
    const auto s_groups = portfolio::group_severity(seismic.claims, seismic.grouping);
    for (std::size_t g = 0; g < s_groups.b.size(); ++g) {
        CHECK(mh_groups.b[g] == doctest::Approx(s_groups.b[g]).epsilon(1e-15));
        CHECK(mh_groups.ey[g] == doctest::Approx(s_groups.ey[g]).epsilon(1e-15));
    }
    const scheme::TailBound mb(mh_groups, scheme::BoundMode::SimplifiedBernoulli);
    const scheme::TailBound sb(s_groups, scheme::BoundMode::SimplifiedBernoulli);
    CHECK(mb.solve(0.01) == doctest::Approx(sb.solve(0.01)).epsilon(1e-12));

    // b_g adds the two perils' severities per municipality.
    portfolio::ClaimSeverity flood = seismic.claims;
    flood.a = {1.0, 0.5};
    flood.q = {0.1, 0.2};
    flood.expected_total = 0.2;
    portfolio::MultiHazardSeverity both{seismic.claims, flood};
    const auto both_groups = portfolio::group_severity_multi(both, seismic.grouping);
    CHECK(both_groups.b[0] == doctest::Approx(3.0));
    CHECK(both_groups.b[1] == doctest::Approx(3.5));
    CHECK(both_groups.e_y ==
          doctest::Approx(seismic.claims.expected_total + flood.expected_total));
}

TEST_CASE("pipeline on the fixture satisfies the scheme invariants") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "natcat_scheme_fixture";
    synth::SynthConfig cfg;
    cfg.profile = synth::Profile::Fixture;
    synth::generate_portfolio(cfg, dir);
    const auto p = portfolio::load_portfolio(dir);

    pipeline::SchemeConfig config;
    config.peril = loss::Peril::Seismic;
    config.samplings = 8;
    const auto run = pipeline::run_scheme(p, config, par::Exec::Serial);
    REQUIRE(run.policies.size() == 4);
    for (const auto& entry : run.policies) {
        for (const auto& s : entry.solution.per_sampling) {
            CHECK(s.w_d_star >= 0.0);
            CHECK(s.eps1_star <= config.eps1 + 1e-12);
            CHECK(s.eps2_star >= s.eps1_star - 1e-12);
            CHECK(s.w_d_star == doctest::Approx(s.n_municipalities *
                                                (s.phi_star - s.gamma_star))
                                    .epsilon(1e-6));
            if (s.w_d_star == 0.0) CHECK(s.phi_star == doctest::Approx(s.gamma_star));
        }
        // Demand side is grouping-independent.
        CHECK(entry.solution.sum_p_star.cov == doctest::Approx(0.0).epsilon(1e-12));
    }

    CHECK_THROWS_AS([&] {
        pipeline::SchemeConfig bad = config;
        bad.eps2 = 0.005;
        pipeline::run_scheme(p, bad, par::Exec::Serial);
    }(), InputError);
}
