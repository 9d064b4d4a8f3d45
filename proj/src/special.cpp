#include "rcmu/special.hpp"

#include "rcmu/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace rcmu {

namespace {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

// Modified Lentz evaluation of the incomplete-beta continued fraction.
double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 20000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) return h;
    }
    throw Error("incomplete beta continued fraction did not converge");
}

// Solves tail(t) == q for t >= 0 where tail is decreasing from 1/2 at t = 0.
template <typename Tail, typename Density>
double invert_upper_tail(double q, Tail tail, Density density) {
    double lo = 0.0;
    double hi = 1.0;
    while (tail(hi) > q) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) throw Error("quantile bracket overflow");
    }
    double t = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
        const double g = tail(t) - q;
        if (g > 0.0)
            lo = t;
        else
            hi = t;
        const double slope = -density(t);
        double next = slope != 0.0 ? t - g / slope : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - t) <= 1e-14 * std::max(1.0, std::fabs(t)) || hi - lo <= 1e-15 * std::max(1.0, hi)) return next;
        t = next;
    }
    return t;
}

void check_dof(double dof) {
    if (!(dof > 0.0)) throw Error("degrees of freedom must be > 0");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw Error("incomplete beta: a and b must be > 0");
    if (!(x >= 0.0 && x <= 1.0)) throw Error("incomplete beta: x must be in [0, 1]");
    if (x == 0.0) return 0.0;
    if (x == 1.0) return 1.0;
    const double log_front = a * std::log(x) + b * std::log1p(-x) - log_beta(a, b);
    if (x < (a + 1.0) / (a + b + 2.0)) return std::exp(log_front) * beta_continued_fraction(a, b, x) / a;
    return 1.0 - std::exp(log_front) * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double normal_quantile(double p) { return t_quantile(p, kInfiniteDof); }

double student_t_pdf(double t, double dof) {
    check_dof(dof);
    if (std::isinf(dof)) return std::exp(-0.5 * t * t) / std::sqrt(2.0 * std::numbers::pi);
    const double log_norm = std::lgamma(0.5 * (dof + 1.0)) - std::lgamma(0.5 * dof) - 0.5 * std::log(dof * std::numbers::pi);
    return std::exp(log_norm - 0.5 * (dof + 1.0) * std::log1p(t * t / dof));
}

double student_t_sf(double t, double dof) {
    check_dof(dof);
    if (std::isinf(dof)) return 0.5 * std::erfc(t / std::numbers::sqrt2);
    if (t == 0.0) return 0.5;
    const double tail = 0.5 * regularized_incomplete_beta(0.5 * dof, 0.5, dof / (dof + t * t));
    return t > 0.0 ? tail : 1.0 - tail;
}

double student_t_cdf(double t, double dof) { return student_t_sf(-t, dof); }

double t_quantile(double p, double dof) {
    check_dof(dof);
    if (!(p > 0.0 && p < 1.0)) throw Error("t_quantile: p must be in (0, 1), got " + std::to_string(p));
    if (p == 0.5) return 0.0;
    const double q = p > 0.5 ? 1.0 - p : p;
    const double t = invert_upper_tail(
        q, [dof](double x) { return student_t_sf(x, dof); }, [dof](double x) { return student_t_pdf(x, dof); });
    return p > 0.5 ? t : -t;
}

double f_pdf(double f, double d1, double d2) {
    check_dof(d1);
    check_dof(d2);
    if (f <= 0.0) return 0.0;
    const double log_pdf = 0.5 * d1 * std::log(d1 / d2) + (0.5 * d1 - 1.0) * std::log(f) -
                           0.5 * (d1 + d2) * std::log1p(d1 * f / d2) - log_beta(0.5 * d1, 0.5 * d2);
    return std::exp(log_pdf);
}

double f_cdf(double f, double d1, double d2) {
    check_dof(d1);
    check_dof(d2);
    if (f <= 0.0) return 0.0;
    return regularized_incomplete_beta(0.5 * d1, 0.5 * d2, d1 * f / (d1 * f + d2));
}

double f_sf(double f, double d1, double d2) {
    check_dof(d1);
    check_dof(d2);
    if (f <= 0.0) return 1.0;
    return regularized_incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f));
}

}  // namespace rcmu
