#ifndef NATCAT_SCHEME_HPP
#define NATCAT_SCHEME_HPP

#include "natcat/geo.hpp"
#include "natcat/par.hpp"
#include "natcat/portfolio.hpp"

#include <optional>
#include <vector>

namespace natcat::scheme {

enum class BoundMode { SimplifiedBernoulli, GenericMgf };

// Tail-bound machinery for the grouped claim sum. In simplified mode the bound
// at margin phi is sum_g w_g exp(-2 phi^2 n_g^2 / b_g^2); in generic mode it is
// the Chernoff bound with the exact Bernoulli probability generating function,
// minimised over the free parameter h on a log grid.
class TailBound {
public:
    TailBound(const portfolio::GroupSeverity& groups, BoundMode mode,
              const geo::GroupingSample* grouping = nullptr,
              const portfolio::ClaimSeverity* claims = nullptr,
              const portfolio::MultiHazardSeverity* multi = nullptr);

    // P(Y > N_c * margin + E[Y]) upper bound; 1 for margin <= 0.
    double evaluate(double margin) const;
    // Smallest margin whose bound equals `epsilon` (monotone bisection).
    double solve(double epsilon) const;

    double e_y() const { return e_y_; }
    double n_total() const { return n_total_; }
    // h that attained the minimum in the last generic-mode evaluation of
    // solve(); meaningful only in generic mode.
    double last_h() const { return last_h_; }

    double evaluate_generic_at_h(double margin, double h) const;

private:
    double simplified(double margin) const;
    double generic(double margin) const;

    BoundMode mode_;
    std::vector<double> w_, n_, b_, ey_;
    // Per group, per municipality severity/probability pairs (generic mode).
    std::vector<std::vector<std::pair<double, double>>> members_;
    double e_y_ = 0.0;
    double n_total_ = 0.0;
    mutable double last_h_ = 0.0;
};

struct SchemeSolution {
    double sum_p_h = 0.0;        // aggregate willingness to pay
    double sum_p_g = 0.0;        // supply-required premium pool N_c gamma + E[Y]
    double sum_p_star = 0.0;     // min(c,1) * sum_p_h
    double c = 0.0;
    double w_d_star = 0.0;
    double phi = 0.0;
    double gamma = 0.0;
    double phi_star = 0.0;
    double gamma_star = 0.0;
    double eps1_star = 0.0;
    double eps2_star = 0.0;
    double e_y = 0.0;
    double n_municipalities = 0.0;
    bool market_failure = false;     // no demand at all against a positive requirement
    bool vacuous_eps2 = false;       // premium pool below E[Y]; bound reported as 1
};

// Demand/supply reconciliation: c = (N_c gamma + E[Y]) / sum_p_h.
std::pair<double, double> reconcile(double sum_p_h, double gamma, double e_y, double n_c);

// Full per-sampling solve for given targets.
SchemeSolution solve_scheme(const TailBound& bound, double sum_p_h, double eps1, double eps2);

struct AggregatedField {
    double mean = 0.0;
    double cov = 0.0;
};

struct AggregatedSolution {
    AggregatedField sum_p_star, c, w_d_star, eps1_star, eps2_star, phi_star, gamma_star;
    std::vector<SchemeSolution> per_sampling;
};

AggregatedSolution aggregate_over_samplings(std::vector<SchemeSolution> per_sampling);

} // namespace natcat::scheme

#endif
