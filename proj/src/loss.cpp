#include "natcat/loss.hpp"
#include "natcat/errors.hpp"
#include "natcat/num.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

namespace natcat::loss {

void Policy::validate(double rc) const {
    if (deductible < 0.0) throw InputError("policy: deductible must be >= 0");
    if (max_coverage <= 0.0) throw InputError("policy: max coverage must be positive");
    if (deductible >= rc) throw InputError("policy: deductible must stay below RC");
}

double reimbursement(double l, const Policy& policy) {
    if (l < 0.0) throw InputError("reimbursement: negative loss");
    const double d = policy.deductible, e = policy.max_coverage;
    if (policy.cap == CapConvention::DeductiblePlusCoverage) {
        if (l <= d) return 0.0;
        if (l < e + d) return l - d;
        return e;
    }
    if (l <= d) return 0.0;
    if (l < e) return l - d;
    return e - d;
}

double max_retained_loss(const Policy& policy, double rc) {
    double worst = 0.0;
    for (double l : {policy.deductible, rc, policy.max_coverage + policy.deductible,
                     policy.max_coverage}) {
        if (l < 0.0 || l > rc) continue;
        worst = std::max(worst, l - reimbursement(l, policy));
    }
    worst = std::max(worst, rc - reimbursement(rc, policy));
    return worst;
}

double seismic_loss_given_pga(const SeismicCell& cell, double amplified_pga) {
    if (cell.models.empty()) throw InputError("seismic cell without fragility models");
    if (amplified_pga <= 0.0) throw InputError("seismic loss: pga must be positive");
    const double log_pga = std::log(amplified_pga);
    double total = 0.0;
    for (const auto* m : cell.models) {
        const int n = m->n_limit_states();
        double model_loss = 0.0;
        double prob_next = 0.0;   // P(N+1 | pga) = 0
        for (int ls = n; ls >= 1; --ls) {
            const auto& c = m->params[ls - 1];
            const double prob = num::normal_cdf((log_pga - c.mu) / c.sigma);
            model_loss += vuln::damage_fraction(*m, ls, cell.damage_alpha) *
                          std::max(0.0, prob - prob_next);
            prob_next = prob;
        }
        total += model_loss;
    }
    return cell.rc * total / static_cast<double>(cell.models.size());
}

double seismic_loss_inverse(const SeismicCell& cell, double loss_level) {
    const double at_min = seismic_loss_given_pga(cell, cell.amplification * cell.hazard.pga_min);
    if (loss_level <= at_min) return cell.hazard.pga_min;
    double lo = cell.hazard.pga_min, hi = std::max(1.0, 2.0 * cell.hazard.pga_min);
    while (seismic_loss_given_pga(cell, cell.amplification * hi) < loss_level) {
        hi *= 2.0;
        if (hi > 1e9) return hi;   // loss level above the attainable supremum
    }
    for (int i = 0; i < 200 && (hi - lo) > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (seismic_loss_given_pga(cell, cell.amplification * mid) >= loss_level)
            hi = mid;
        else
            lo = mid;
    }
    return hi;
}

namespace {

// Centered log-ratio of the purchase indifference condition at one loss
// level: log((rc-l+1)/(rc+1)) - log((rc-p-l+x+1)/(rc-p+1)). It vanishes at
// l = x = 0, so quadrature error scales with the hazard mass that actually
// carries losses; the no-loss constant log((rc+1)/(rc-p+1)) is added back
// analytically by the callers.
double centered_log_ratio(double rc, double l, double x, double p) {
    const double insured = rc - p - l + x + 1.0;
    if (insured <= 0.0)
        throw NumericError("indifference residual: non-positive log argument (premium too high)");
    return std::log1p(-l / (rc + 1.0)) - std::log1p((x - l) / (rc - p + 1.0));
}

double no_loss_log_ratio(double rc, double p) {
    if (rc - p + 1.0 <= 0.0)
        throw NumericError("indifference residual: premium at or above total wealth");
    return std::log((rc + 1.0) / (rc - p + 1.0));
}

} // namespace

SeismicQuadrature::Level SeismicQuadrature::build(const std::vector<double>& cuts,
                                                  int panels_per_decade) const {
    // Losses vary on the log of the exceedance, so panels are geometric within
    // each segment; outside the fragility transition band the integrand is
    // flat (zero damage below, saturation above) and a sparse mesh suffices.
    // Below v_floor the curves are saturated to machine precision; that stub
    // enters as a single exact node.
    constexpr double v_floor = 1e-13;
    double t_lo = 1e300, t_hi = -1e300;
    for (const auto* m : cell_.models)
        for (const auto& c : m->params) {
            t_lo = std::min(t_lo, c.mu - 7.0 * c.sigma);
            t_hi = std::max(t_hi, c.mu + 7.0 * c.sigma);
        }
    // Transition band in exceedance coordinates (decreasing in pga).
    const double v_band_hi =
        std::min(1.0, cell_.hazard.exceedance(std::exp(t_lo) / cell_.amplification));
    const double v_band_lo =
        std::max(v_floor, cell_.hazard.exceedance(std::exp(t_hi) / cell_.amplification));

    Level level;
    for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
        const double lo = std::max(cuts[s], v_floor);
        const double hi = cuts[s + 1];
        if (cuts[s] == 0.0) {
            const double u = cell_.hazard.quantile_from_exceedance(v_floor);
            level.w.push_back(v_floor);
            level.loss.push_back(seismic_loss_given_pga(cell_, cell_.amplification * u));
        }
        if (hi <= lo) continue;
        const bool in_band = hi > v_band_lo && lo < v_band_hi;
        const int ppd = in_band ? panels_per_decade : std::max(2, panels_per_decade / 16);
        const double decades = std::log10(hi / lo);
        const int panels = std::max(2, static_cast<int>(ppd * decades) + 1);
        const double ratio = std::pow(hi / lo, 1.0 / panels);
        double a = lo;
        for (int p = 0; p < panels; ++p) {
            const double b = (p + 1 == panels) ? hi : a * ratio;
            const auto rule = num::composite_k15(a, b, 1);
            for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
                const double u = cell_.hazard.quantile_from_exceedance(rule.nodes[i]);
                level.w.push_back(rule.kronrod_w[i]);
                level.loss.push_back(seismic_loss_given_pga(cell_, cell_.amplification * u));
            }
            a = b;
        }
    }
    return level;
}

SeismicQuadrature::SeismicQuadrature(const SeismicCell& cell, const Policy* policy,
                                     double rel_tol)
    : cell_(cell), rel_tol_(rel_tol) {
    if (cell_.models.empty()) throw InputError("seismic cell without fragility models");
    // Segment boundaries in exceedance coordinates at the reimbursement kinks.
    std::vector<double> cuts{0.0, 1.0};
    if (policy) {
        const double sup_loss = cell_.rc;
        auto cut_at = [&](double level) {
            if (level <= 0.0 || level >= sup_loss) return;
            const double u = seismic_loss_inverse(cell_, level);
            const double v = cell_.hazard.exceedance(u);
            if (v > 1e-12 && v < 1.0 - 1e-12) cuts.push_back(v);
        };
        cut_at(policy->deductible);
        if (policy->cap == CapConvention::DeductiblePlusCoverage)
            cut_at(policy->max_coverage + policy->deductible);
        else
            cut_at(policy->max_coverage);
    }
    // Split at the fragility transition band so the sparse/dense mesh choice
    // is made per whole segment.
    double t_lo = 1e300, t_hi = -1e300;
    for (const auto* m : cell_.models)
        for (const auto& c : m->params) {
            t_lo = std::min(t_lo, c.mu - 7.0 * c.sigma);
            t_hi = std::max(t_hi, c.mu + 7.0 * c.sigma);
        }
    auto cut_at_log_pga = [&](double t) {
        const double v = cell_.hazard.exceedance(std::exp(t) / cell_.amplification);
        if (v > 1e-12 && v < 1.0 - 1e-12) cuts.push_back(v);
    };
    cut_at_log_pga(t_lo);
    cut_at_log_pga(t_hi);
    // Adjacent limit-state curves with unequal sigma cross once; the clamped
    // damage-state weight kinks there, so the crossing becomes a panel edge.
    for (const auto* m : cell_.models)
        for (int ls = 0; ls + 1 < m->n_limit_states(); ++ls) {
            const auto& c1 = m->params[ls];
            const auto& c2 = m->params[ls + 1];
            if (c1.sigma == c2.sigma) continue;
            cut_at_log_pga((c2.mu * c1.sigma - c1.mu * c2.sigma) / (c1.sigma - c2.sigma));
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    // Refine against the integrand families the tables serve: the loss, the
    // centered uninsured log-wealth term, and (with a policy) the indifference
    // integrand at the top of the premium bracket, which is the steepest
    // surface the bisection will probe.
    const double p_worst =
        policy ? 0.999 * std::max(0.0, std::min(cell_.rc, cell_.rc -
                                                              max_retained_loss(*policy,
                                                                                cell_.rc)))
               : 0.0;
    auto level_sums = [&](const Level& level) {
        std::array<double, 3> sums{0.0, 0.0, 0.0};
        for (std::size_t i = 0; i < level.loss.size(); ++i) {
            const double l = level.loss[i];
            sums[0] += level.w[i] * l;
            sums[1] += level.w[i] * std::log1p(-l / (cell_.rc + 1.0));
            if (policy)
                sums[2] += level.w[i] *
                           centered_log_ratio(cell_.rc, l, reimbursement(l, *policy), p_worst);
        }
        return sums;
    };
    int ppd = 8;
    coarse_ = build(cuts, ppd);
    fine_ = build(cuts, 2 * ppd);
    while (ppd < 512) {
        const auto ic = level_sums(coarse_);
        const auto fi = level_sums(fine_);
        const bool loss_ok =
            std::fabs(fi[0] - ic[0]) <= std::max(rel_tol_ * std::fabs(fi[0]), 1e-12 * cell_.rc);
        const bool log_ok =
            std::fabs(fi[1] - ic[1]) <= std::max(rel_tol_ * std::fabs(fi[1]), 2e-11);
        const bool worst_ok =
            !policy ||
            std::fabs(fi[2] - ic[2]) <= std::max(rel_tol_ * std::fabs(fi[2]), 2e-11);
        if (loss_ok && log_ok && worst_ok) break;
        ppd *= 2;
        coarse_ = std::move(fine_);
        fine_ = build(cuts, 2 * ppd);
    }
}

template <typename F>
double SeismicQuadrature::integrate_checked(F&& f, double abs_floor) const {
    double ic = 0.0, fi = 0.0;
    for (std::size_t i = 0; i < coarse_.loss.size(); ++i) ic += coarse_.w[i] * f(coarse_.loss[i]);
    for (std::size_t i = 0; i < fine_.loss.size(); ++i) fi += fine_.w[i] * f(fine_.loss[i]);
    const double err = std::fabs(fi - ic);
    const double tol = std::max(rel_tol_ * std::fabs(fi), abs_floor);
    if (err > tol) {
        char buf[160];
        std::snprintf(buf, sizeof buf,
                      "seismic quadrature: level difference %.3e above tolerance %.3e "
                      "(value %.6e, %zu nodes)",
                      err, tol, fi, fine_.loss.size());
        throw NumericError(buf);
    }
    return fi;
}

double SeismicQuadrature::expected_loss() const {
    return integrate_checked([](double l) { return l; }, 1e-11 * cell_.rc);
}

double SeismicQuadrature::expected_reimbursement(const Policy& policy) const {
    return integrate_checked([&](double l) { return reimbursement(l, policy); },
                             1e-11 * cell_.rc);
}

double SeismicQuadrature::indifference_residual(const Policy& policy, double p) const {
    // The power-law density carries total mass one, so the no-loss constant
    // enters with weight one rather than as a separate point mass.
    return no_loss_log_ratio(cell_.rc, p) +
           integrate_checked(
               [&](double l) {
                   return centered_log_ratio(cell_.rc, l, reimbursement(l, policy), p);
               },
               1e-10);
}

double seismic_loss_per_sqm(const SeismicCell& cell, double rel_tol) {
    return SeismicQuadrature(cell, nullptr, rel_tol).expected_loss();
}

double expected_reimbursement_seismic(const SeismicCell& cell, const Policy& policy,
                                      double rel_tol) {
    policy.validate(cell.rc);
    return SeismicQuadrature(cell, &policy, rel_tol).expected_reimbursement(policy);
}

double flood_loss_given_depth(const FloodCell& cell, double depth) {
    return cell.rc / 100.0 * vuln::depth_damage(cell.curve, depth);
}

double flood_loss_per_sqm(const FloodCell& cell, double rel_tol) {
    if (cell.freq_prob < 0.0 || cell.freq_prob > 1.0)
        throw InputError("flood cell: P(N_F >= 1) outside [0,1]");
    if (cell.freq_prob == 0.0) return 0.0;
    const double body =
        num::integrate(
            [&](double d) { return vuln::depth_damage(cell.curve, d) * cell.depth.pdf(d); }, 0.0,
            cell.curve.delta_max, rel_tol)
            .value;
    const double tail = 100.0 * (1.0 - cell.depth.cdf(cell.curve.delta_max));
    return cell.rc / 100.0 * cell.freq_prob * (body + tail);
}

double expected_reimbursement_flood(const FloodCell& cell, const Policy& policy,
                                    double rel_tol) {
    policy.validate(cell.rc);
    if (cell.freq_prob == 0.0) return 0.0;
    const double rc = cell.rc;
    const double cap_level = (policy.cap == CapConvention::DeductiblePlusCoverage)
                                 ? policy.max_coverage + policy.deductible
                                 : policy.max_coverage;
    const double delta_d =
        vuln::invert_depth(cell.curve, std::min(100.0, 100.0 * policy.deductible / rc));
    const double delta_e =
        vuln::invert_depth(cell.curve, std::min(100.0, 100.0 * cap_level / rc));
    double band = 0.0;
    if (delta_e > delta_d)
        band = num::integrate(
                   [&](double d) {
                       return (flood_loss_given_depth(cell, d) - policy.deductible) *
                              cell.depth.pdf(d);
                   },
                   delta_d, delta_e, rel_tol)
                   .value;
    const double x_sup = reimbursement(rc, policy);
    return cell.freq_prob * (band + x_sup * (1.0 - cell.depth.cdf(delta_e)));
}

double flood_indifference_residual(const FloodCell& cell, const Policy& policy, double p,
                                   double rel_tol) {
    policy.validate(cell.rc);
    const double rc = cell.rc;
    // Point mass 1 - P(N_F >= 1) at no flood plus the flooded branch; the
    // no-loss constant factors out of both.
    double residual = no_loss_log_ratio(rc, p);
    if (cell.freq_prob == 0.0) return residual;

    const double cap_level = (policy.cap == CapConvention::DeductiblePlusCoverage)
                                 ? policy.max_coverage + policy.deductible
                                 : policy.max_coverage;
    const double delta_d =
        vuln::invert_depth(cell.curve, std::min(100.0, 100.0 * policy.deductible / rc));
    const double delta_e =
        vuln::invert_depth(cell.curve, std::min(100.0, 100.0 * cap_level / rc));
    const double dmax = cell.curve.delta_max;

    // Reimbursement kinks at delta_D and delta_E split the depth integral into
    // smooth pieces; beyond delta_max the loss is total.
    auto piece = [&](double lo, double hi) {
        if (hi <= lo) return 0.0;
        return num::integrate(
                   [&](double d) {
                       const double l = flood_loss_given_depth(cell, d);
                       return centered_log_ratio(rc, l, reimbursement(l, policy), p) *
                              cell.depth.pdf(d);
                   },
                   lo, hi, rel_tol)
            .value;
    };
    double integral = piece(0.0, delta_d) + piece(delta_d, delta_e) + piece(delta_e, dmax);
    const double tail_weight = 1.0 - cell.depth.cdf(dmax);
    if (tail_weight > 0.0)
        integral += tail_weight * centered_log_ratio(rc, rc, reimbursement(rc, policy), p);
    return residual + cell.freq_prob * integral;
}

} // namespace natcat::loss
