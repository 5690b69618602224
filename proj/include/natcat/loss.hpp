#ifndef NATCAT_LOSS_HPP
#define NATCAT_LOSS_HPP

#include "natcat/hazard.hpp"
#include "natcat/vulnerability.hpp"

#include <vector>

namespace natcat::loss {

enum class Peril { Seismic, Flood, Multi };

// Reimbursement cap convention. Standard: x = E once l >= E + D. The variant
// (x = E - D once l >= E) appears in one place in the source material and is
// kept behind this switch without being endorsed.
enum class CapConvention { DeductiblePlusCoverage, CoverageMinusDeductible };

struct Policy {
    double deductible = 0.0;        // D, euro per square metre
    double max_coverage = 1500.0;   // E, euro per square metre
    Peril peril = Peril::Seismic;
    CapConvention cap = CapConvention::DeductiblePlusCoverage;

    void validate(double rc) const;
};

// x(l): 0 below D, l - D in the band, capped per the convention.
double reimbursement(double loss, const Policy& policy);

// Largest loss retained by the owner, sup_l (l - x(l)) over l in [0, rc].
double max_retained_loss(const Policy& policy, double rc);

// ---------------------------------------------------------------------------
// Seismic: power-law hazard integrated against fragility-derived losses.
// All integrals are computed in exceedance coordinates v = lambda(pga),
// which maps [pga_min, inf) onto (0, 1] exactly and makes the density
// uniform, so the upper tail needs no truncation.
// ---------------------------------------------------------------------------

struct SeismicCell {
    hazard::PowerLawHazard hazard;
    double amplification = 1.0;
    std::vector<const vuln::FragilityModel*> models;
    double rc = 1500.0;
    double damage_alpha = 1.0;
};

// Loss per square metre at a given amplified PGA: damage-state weights times
// reconstruction-cost fractions, averaged over the applicable models.
double seismic_loss_given_pga(const SeismicCell& cell, double amplified_pga);

// Fixed quadrature table for one cell (and optionally one policy): nodes in
// exceedance coordinates with the per-node loss precomputed, split at the
// deductible / cap crossings so every integrand stays smooth per segment.
class SeismicQuadrature {
public:
    SeismicQuadrature(const SeismicCell& cell, const Policy* policy, double rel_tol = 1e-8);

    double expected_loss() const;
    double expected_reimbursement(const Policy& policy) const;

    // Indifference residual at premium p (demand side); the no-event mass is
    // absorbed in the integral because the power-law density has total mass 1.
    double indifference_residual(const Policy& policy, double p) const;

    std::size_t nodes() const { return fine_.loss.size(); }

private:
    struct Level {
        std::vector<double> w;
        std::vector<double> loss;
    };
    Level build(const std::vector<double>& cuts, int panels_per_decade) const;

    // Integrates f(loss) on both levels; the level difference is the error
    // estimate (the refined level is the value).
    template <typename F>
    double integrate_checked(F&& f, double abs_floor) const;

    SeismicCell cell_;
    Level coarse_, fine_;
    double rel_tol_;
};

double seismic_loss_per_sqm(const SeismicCell& cell, double rel_tol = 1e-8);
double expected_reimbursement_seismic(const SeismicCell& cell, const Policy& policy,
                                      double rel_tol = 1e-8);

// Bedrock PGA at which the cell loss first reaches `loss_level`; used for the
// claim probability q_c = P(loss exceeds the deductible).
double seismic_loss_inverse(const SeismicCell& cell, double loss_level);

// ---------------------------------------------------------------------------
// Flood: frequency times depth-conditional damage.
// ---------------------------------------------------------------------------

struct FloodCell {
    double freq_prob = 0.0;   // P(N_F >= 1) for this municipality
    hazard::DepthDistribution depth;
    vuln::DepthDamageCurve curve;
    double rc = 1500.0;
};

double flood_loss_given_depth(const FloodCell& cell, double depth);
double flood_loss_per_sqm(const FloodCell& cell, double rel_tol = 1e-8);
double expected_reimbursement_flood(const FloodCell& cell, const Policy& policy,
                                    double rel_tol = 1e-8);
double flood_indifference_residual(const FloodCell& cell, const Policy& policy, double p,
                                   double rel_tol = 1e-8);

} // namespace natcat::loss

#endif
