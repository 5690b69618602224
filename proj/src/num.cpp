#include "natcat/num.hpp"
#include "natcat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

namespace natcat::num {

double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

double digamma(double x) {
    // Recurrence up to x >= 10, then the Bernoulli asymptotic expansion.
    double result = 0.0;
    while (x < 10.0) {
        result -= 1.0 / x;
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += std::log(x) - 0.5 * inv -
              inv2 * (1.0 / 12.0 -
                      inv2 * (1.0 / 120.0 -
                              inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))));
    return result;
}

double trigamma(double x) {
    double result = 0.0;
    while (x < 10.0) {
        result += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    result += inv * (1.0 + 0.5 * inv +
                     inv2 * (1.0 / 6.0 -
                             inv2 * (1.0 / 30.0 -
                                     inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0)))));
    return result;
}

namespace {

double gamma_p_series(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int n = 1; n < 500; ++n) {
        term *= x / (a + n);
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
    // Lentz's continued fraction for Q(a, x).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < 500; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

} // namespace

double gamma_p(double a, double x) {
    if (a <= 0.0) throw NumericError("gamma_p: shape must be positive");
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return gamma_p_series(a, x);
    return 1.0 - gamma_q_contfrac(a, x);
}

namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1, 1] (symmetric half listed).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelEstimate {
    double kronrod;
    double gauss;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double resk = kWgk[7] * f(c);
    double resg = kWg[3] * f(c);
    for (int j = 0; j < 7; ++j) {
        const double fv = f(c - h * kXgk[j]) + f(c + h * kXgk[j]);
        resk += kWgk[j] * fv;
        if (j % 2 == 1) resg += kWg[j / 2] * fv;
    }
    return {resk * h, resg * h};
}

} // namespace

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           double rel_tol, double abs_tol, int max_panels) {
    if (a == b) return {0.0, 0.0, 0};
    struct Interval {
        double a, b, value, error;
    };
    auto make = [&](double lo, double hi) {
        const auto est = gk15(f, lo, hi);
        return Interval{lo, hi, est.kronrod, std::fabs(est.kronrod - est.gauss)};
    };
    std::deque<Interval> intervals{make(a, b)};
    int panels = 1;
    while (true) {
        double total = 0.0, err = 0.0;
        for (const auto& iv : intervals) {
            total += iv.value;
            err += iv.error;
        }
        if (err <= std::max(abs_tol, rel_tol * std::fabs(total)))
            return {total, err, panels};
        if (panels >= max_panels)
            throw NumericError("integrate: tolerance not reached after max panels");
        auto worst = std::max_element(intervals.begin(), intervals.end(),
                                      [](const Interval& x, const Interval& y) {
                                          return x.error < y.error;
                                      });
        const Interval iv = *worst;
        intervals.erase(worst);
        const double mid = 0.5 * (iv.a + iv.b);
        intervals.push_back(make(iv.a, mid));
        intervals.push_back(make(mid, iv.b));
        ++panels;
    }
}

PanelRule composite_k15(double a, double b, int panels) {
    PanelRule rule;
    rule.nodes.reserve(15 * panels);
    rule.kronrod_w.reserve(15 * panels);
    rule.gauss_w.reserve(15 * panels);
    const double width = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * width;
        const double c = lo + 0.5 * width;
        const double h = 0.5 * width;
        for (int j = 0; j < 7; ++j) {
            const double gw = (j % 2 == 1) ? kWg[j / 2] * h : 0.0;
            rule.nodes.push_back(c - h * kXgk[j]);
            rule.kronrod_w.push_back(kWgk[j] * h);
            rule.gauss_w.push_back(gw);
            rule.nodes.push_back(c + h * kXgk[j]);
            rule.kronrod_w.push_back(kWgk[j] * h);
            rule.gauss_w.push_back(gw);
        }
        rule.nodes.push_back(c);
        rule.kronrod_w.push_back(kWgk[7] * h);
        rule.gauss_w.push_back(kWg[3] * h);
    }
    return rule;
}

BisectionResult bisect(const std::function<double(double)>& f, double lo, double hi,
                       double f_tol, int max_iter) {
    double flo = f(lo);
    double fhi = f(hi);
    BisectionResult res;
    if (std::fabs(flo) <= f_tol) return {lo, flo, 0, true};
    if (std::fabs(fhi) <= f_tol) return {hi, fhi, 0, true};
    if (flo * fhi > 0.0) return res;   // no sign change; converged stays false
    for (int i = 1; i <= max_iter; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fmid = f(mid);
        res.iterations = i;
        if (std::fabs(fmid) <= f_tol || 0.5 * (hi - lo) < 1e-15 * std::max(1.0, std::fabs(mid))) {
            res.root = mid;
            res.f_root = fmid;
            res.converged = true;
            return res;
        }
        if (flo * fmid <= 0.0) {
            hi = mid;
        } else {
            lo = mid;
            flo = fmid;
        }
    }
    res.root = 0.5 * (lo + hi);
    res.f_root = f(res.root);
    res.converged = std::fabs(res.f_root) <= f_tol;
    return res;
}

MeanCov mean_cov(const std::vector<double>& xs) {
    MeanCov mc;
    if (xs.empty()) return mc;
    // Identical samples have zero dispersion exactly; computing it through the
    // rounded mean would leave 1e-16-level noise where the report must show 0.
    bool all_equal = true;
    for (double x : xs)
        if (x != xs.front()) {
            all_equal = false;
            break;
        }
    if (all_equal) {
        mc.mean = xs.front();
        return mc;
    }
    double sum = 0.0;
    for (double x : xs) sum += x;
    mc.mean = sum / xs.size();
    if (mc.mean == 0.0) return mc;
    double ss = 0.0;
    for (double x : xs) ss += (x - mc.mean) * (x - mc.mean);
    mc.cov = std::sqrt(ss / xs.size()) / std::fabs(mc.mean);
    return mc;
}

} // namespace natcat::num
