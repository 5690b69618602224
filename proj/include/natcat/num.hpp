#ifndef NATCAT_NUM_HPP
#define NATCAT_NUM_HPP

#include <functional>
#include <vector>

namespace natcat::num {

inline constexpr double kZ95 = 1.959963984540054;      // two-sided 95% normal quantile
inline constexpr double kZ9999 = 3.719016485455709;    // one-sided 99.99% normal quantile

double normal_cdf(double z);
double digamma(double x);
double trigamma(double x);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

struct QuadratureResult {
    double value = 0.0;
    double abs_error = 0.0;
    int panels = 0;
};

// Adaptive Gauss-Kronrod (G7/K15) on [a, b].
// Throws NumericError if the tolerance cannot be met within max_panels.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol = 1e-8, double abs_tol = 1e-14,
                           int max_panels = 4096);

// Fixed composite K15 node table on [a, b], split in `panels` equal panels.
// Used where one integrand family is evaluated many times against the same
// abscissae; `gauss_value` carries the embedded G7 estimate for an error check.
struct PanelRule {
    std::vector<double> nodes;
    std::vector<double> kronrod_w;
    std::vector<double> gauss_w;   // zero entries on Kronrod-only nodes
};
PanelRule composite_k15(double a, double b, int panels);

struct BisectionResult {
    double root = 0.0;
    double f_root = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Bisection for increasing or decreasing f on [lo, hi]; requires a sign change.
BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi,
                       double f_tol, int max_iter = 200);

struct MeanCov {
    double mean = 0.0;
    double cov = 0.0;   // population stddev / mean, 0 when mean is 0
};
MeanCov mean_cov(const std::vector<double>& xs);

} // namespace natcat::num

#endif
