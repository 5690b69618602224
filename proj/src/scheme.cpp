#include "natcat/scheme.hpp"
#include "natcat/errors.hpp"
#include "natcat/num.hpp"

#include <algorithm>
#include <cmath>

namespace natcat::scheme {

TailBound::TailBound(const portfolio::GroupSeverity& groups, BoundMode mode,
                     const geo::GroupingSample* grouping,
                     const portfolio::ClaimSeverity* claims,
                     const portfolio::MultiHazardSeverity* multi)
    : mode_(mode), w_(groups.w), n_(groups.n), b_(groups.b), ey_(groups.ey),
      e_y_(groups.e_y) {
    for (double n : n_) n_total_ += n;
    if (mode_ == BoundMode::GenericMgf) {
        if (!grouping || (!claims && !multi))
            throw InputError("generic bound mode needs the grouping and the severities");
        members_.resize(grouping->groups.size());
        for (std::size_t g = 0; g < grouping->groups.size(); ++g)
            for (std::size_t idx : grouping->groups[g]) {
                if (claims) {
                    members_[g].emplace_back(claims->a[idx], claims->q[idx]);
                } else {
                    members_[g].emplace_back(multi->seismic.a[idx], multi->seismic.q[idx]);
                    members_[g].emplace_back(multi->flood.a[idx], multi->flood.q[idx]);
                }
            }
    }
}

double TailBound::simplified(double margin) const {
    double total = 0.0;
    for (std::size_t g = 0; g < w_.size(); ++g) {
        if (b_[g] <= 0.0) continue;   // no exposure: the group cannot exceed any margin
        const double r = margin * n_[g] / b_[g];
        total += w_[g] * std::exp(-2.0 * r * r);
    }
    return std::min(1.0, total);
}

namespace {

// log(1 + (e^x - 1) q), the log Bernoulli mgf, stable for large x.
double log_bernoulli_mgf(double x, double q) {
    if (q <= 0.0 || x <= 0.0) return 0.0;
    if (x > 30.0) return x + std::log(q) + std::log1p((1.0 - q) * std::exp(-x) / q);
    return std::log1p(std::expm1(x) * q);
}

} // namespace

double TailBound::evaluate_generic_at_h(double margin, double h) const {
    // log of e^{-h margin} sum_g w_g e^{-(h/n_g) E[Y^g]} prod_c M_c(h/n_g).
    double total = 0.0;
    for (std::size_t g = 0; g < w_.size(); ++g) {
        double log_term = -h / n_[g] * ey_[g];
        for (const auto& [a, q] : members_[g])
            log_term += log_bernoulli_mgf(h / n_[g] * a, q);
        total += w_[g] * std::exp(std::min(700.0, log_term - h * margin));
    }
    return std::min(1.0, total);
}

double TailBound::generic(double margin) const {
    // Minimise over h > 0 on a log grid scaled to the largest per-unit claim.
    double a_max = 0.0;
    for (std::size_t g = 0; g < w_.size(); ++g)
        for (const auto& [a, q] : members_[g]) a_max = std::max(a_max, a / n_[g]);
    if (a_max <= 0.0) return margin > 0.0 ? 0.0 : 1.0;
    double best = 1.0;
    double best_h = 0.0;
    for (int i = 0; i <= 240; ++i) {
        const double h = std::pow(10.0, -6.0 + 9.0 * i / 240.0) / a_max;
        const double v = evaluate_generic_at_h(margin, h);
        if (v < best) {
            best = v;
            best_h = h;
        }
    }
    last_h_ = best_h;
    return best;
}

double TailBound::evaluate(double margin) const {
    if (margin <= 0.0) return 1.0;
    return mode_ == BoundMode::SimplifiedBernoulli ? simplified(margin) : generic(margin);
}

double TailBound::solve(double epsilon) const {
    if (epsilon <= 0.0 || epsilon >= 1.0)
        throw InputError("tail bound: target probability must lie in (0,1)");
    double scale = 0.0;
    for (std::size_t g = 0; g < w_.size(); ++g)
        if (b_[g] > 0.0) scale = std::max(scale, b_[g] / n_[g]);
    if (scale <= 0.0) return 0.0;   // all severities vanish

    if (mode_ == BoundMode::GenericMgf) {
        // Closed form per h: phi(h) = (log S(h) - log eps)/h, minimized on the
        // log grid. S(h) >= 1, so the margin stays positive.
        double a_max = 0.0;
        for (std::size_t g = 0; g < w_.size(); ++g)
            for (const auto& [a, q] : members_[g]) a_max = std::max(a_max, a / n_[g]);
        if (a_max <= 0.0) return 0.0;
        double best = 1e300, best_h = 0.0;
        for (int i = 0; i <= 240; ++i) {
            const double h = std::pow(10.0, -6.0 + 9.0 * i / 240.0) / a_max;
            double log_s = -1e300;
            for (std::size_t g = 0; g < w_.size(); ++g) {
                double log_term = std::log(w_[g]) - h / n_[g] * ey_[g];
                for (const auto& [a, q] : members_[g])
                    log_term += log_bernoulli_mgf(h / n_[g] * a, q);
                log_s = log_s > log_term
                            ? log_s + std::log1p(std::exp(log_term - log_s))
                            : log_term + std::log1p(std::exp(log_s - log_term));
            }
            const double phi = (log_s - std::log(epsilon)) / h;
            if (phi < best) {
                best = phi;
                best_h = h;
            }
        }
        last_h_ = best_h;
        return best;
    }

    double hi = 2.0 * scale * std::sqrt(std::log(1.0 / epsilon) / 2.0);
    while (evaluate(hi) > epsilon) hi *= 2.0;
    double lo = 0.0;
    for (int i = 0; i < 200 && (hi - lo) > 1e-10 * std::max(1.0, hi); ++i) {
        const double mid = 0.5 * (lo + hi);
        if (evaluate(mid) > epsilon)
            lo = mid;
        else
            hi = mid;
    }
    return hi;
}

std::pair<double, double> reconcile(double sum_p_h, double gamma, double e_y, double n_c) {
    if (sum_p_h < 0.0) throw InputError("reconcile: negative demand total");
    const double sum_p_g = n_c * gamma + e_y;
    if (sum_p_h == 0.0) {
        // Total market failure when a positive pool is required; c is formally
        // infinite and the collected premium is zero.
        return {sum_p_g > 0.0 ? std::numeric_limits<double>::infinity() : 1.0, 0.0};
    }
    const double c = sum_p_g / sum_p_h;
    return {c, std::min(c, 1.0) * sum_p_h};
}

SchemeSolution solve_scheme(const TailBound& bound, double sum_p_h, double eps1, double eps2) {
    if (!(eps1 > 0.0) || !(eps2 < 1.0) || eps1 > eps2)
        throw InputError("scheme targets must satisfy 0 < eps1 <= eps2 < 1");
    SchemeSolution s;
    s.e_y = bound.e_y();
    s.n_municipalities = bound.n_total();
    s.sum_p_h = sum_p_h;
    s.phi = bound.solve(eps1);
    s.gamma = bound.solve(eps2);
    const double n_c = s.n_municipalities;
    s.sum_p_g = n_c * s.gamma + s.e_y;
    auto [c, sum_p_star] = reconcile(sum_p_h, s.gamma, s.e_y, n_c);
    s.c = c;
    s.sum_p_star = sum_p_star;
    s.market_failure = !std::isfinite(c) || (sum_p_star == 0.0 && s.sum_p_g > 0.0);

    s.w_d_star = std::max(n_c * s.phi + s.e_y - s.sum_p_star, 0.0);
    s.phi_star = (s.w_d_star + s.sum_p_star - s.e_y) / n_c;
    s.gamma_star = (s.sum_p_star - s.e_y) / n_c;
    s.eps1_star = bound.evaluate(s.phi_star);
    if (s.gamma_star <= 0.0) {
        // Premium pool below expected claims: the refill bound is vacuous.
        s.vacuous_eps2 = true;
        s.eps2_star = 1.0;
    } else {
        s.eps2_star = bound.evaluate(s.gamma_star);
    }
    return s;
}

AggregatedSolution aggregate_over_samplings(std::vector<SchemeSolution> per_sampling) {
    if (per_sampling.empty())
        throw InputError("aggregate_over_samplings: need at least one sampling");
    AggregatedSolution agg;
    auto collect = [&](auto field) {
        std::vector<double> xs;
        xs.reserve(per_sampling.size());
        for (const auto& s : per_sampling) xs.push_back(s.*field);
        const auto mc = num::mean_cov(xs);
        return AggregatedField{mc.mean, mc.cov};
    };
    agg.sum_p_star = collect(&SchemeSolution::sum_p_star);
    agg.c = collect(&SchemeSolution::c);
    agg.w_d_star = collect(&SchemeSolution::w_d_star);
    agg.eps1_star = collect(&SchemeSolution::eps1_star);
    agg.eps2_star = collect(&SchemeSolution::eps2_star);
    agg.phi_star = collect(&SchemeSolution::phi_star);
    agg.gamma_star = collect(&SchemeSolution::gamma_star);
    agg.per_sampling = std::move(per_sampling);
    return agg;
}

} // namespace natcat::scheme
