#pragma once

// Test-only reference computations. Nothing here calls into the library's
// estimators, samplers or special functions; they are the independent side
// of every cross-check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

using Complex = std::complex<double>;

// Composite Simpson on [a, b] with n (even) intervals.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n = 200000) {
    if (n % 2) ++n;
    const double h = (b - a) / n;
    double s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

inline double t_density(double t, double dof) {
    const double c = std::exp(std::lgamma((dof + 1) / 2) - std::lgamma(dof / 2)) / std::sqrt(dof * std::numbers::pi);
    return c * std::pow(1.0 + t * t / dof, -(dof + 1) / 2);
}

// P(T > t) for t >= 0 by integrating the density over [0, t].
inline double t_upper_tail(double t, double dof) { return 0.5 - simpson([dof](double x) { return t_density(x, dof); }, 0.0, t); }

// Root of t_upper_tail(t) == 1 - p by bisection (p > 0.5).
inline double t_quantile_bruteforce(double p, double dof) {
    double lo = 0.0, hi = 1.0;
    while (t_upper_tail(hi, dof) > 1.0 - p) hi *= 2.0;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (t_upper_tail(mid, dof) > 1.0 - p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

inline double f_density(double x, double d1, double d2) {
    if (x <= 0.0) return 0.0;
    const double log_b = std::lgamma(d1 / 2) + std::lgamma(d2 / 2) - std::lgamma((d1 + d2) / 2);
    return std::exp((d1 / 2) * std::log(d1 / d2) + (d1 / 2 - 1) * std::log(x) - ((d1 + d2) / 2) * std::log1p(d1 * x / d2) -
                    log_b);
}

// P(F > f) by integrating the density over [f, inf) with x = f + s / (1 - s).
inline double f_upper_tail(double f, double d1, double d2) {
    auto g = [=](double s) {
        if (s >= 1.0) return 0.0;
        const double x = f + s / (1.0 - s);
        return f_density(x, d1, d2) / ((1.0 - s) * (1.0 - s));
    };
    return simpson(g, 0.0, 1.0, 400000);
}

// Rician samples from the standard library generators, one LOS phase per group.
class RicianSource {
public:
    explicit RicianSource(std::uint64_t seed) : rng_(seed) {}

    // n_tt groups of sp_tt samples, [tt][stir] order; common_phase shares one phase.
    std::vector<Complex> slice(double k_linear, double total_power, std::size_t n_tt, std::size_t sp_tt,
                               bool common_phase = false) {
        const double v = std::sqrt(total_power * k_linear / (1.0 + k_linear));
        const double sigma = std::sqrt(total_power / (1.0 + k_linear) / 2.0);
        std::normal_distribution<double> normal(0.0, sigma);
        std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
        std::vector<Complex> out;
        out.reserve(n_tt * sp_tt);
        const double shared = phase(rng_);
        for (std::size_t tt = 0; tt < n_tt; ++tt) {
            const Complex los = std::polar(v, common_phase ? shared : phase(rng_));
            for (std::size_t s = 0; s < sp_tt; ++s) {
                const double re = normal(rng_);
                const double im = normal(rng_);
                out.push_back(los + Complex(re, im));
            }
        }
        return out;
    }

    double exponential() { return std::exponential_distribution<double>(1.0)(rng_); }
    std::mt19937_64& engine() { return rng_; }

private:
    std::mt19937_64 rng_;
};

// Straight transcriptions of the estimator definitions, plain loops, no shared code.
inline double naive_unbiased_k(const Complex* s, std::size_t n, double bias_n) {
    double mr = 0, mi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mr += s[i].real();
        mi += s[i].imag();
    }
    mr /= n;
    mi /= n;
    double vr = 0, vi = 0;
    for (std::size_t i = 0; i < n; ++i) {
        vr += (s[i].real() - mr) * (s[i].real() - mr);
        vi += (s[i].imag() - mi) * (s[i].imag() - mi);
    }
    const double two_sigma2 = vr / (n - 1) + vi / (n - 1);
    const double k2 = (mr * mr + mi * mi) / two_sigma2;
    return (bias_n - 2) / (bias_n - 1) * k2 - 1.0 / bias_n;
}

inline double naive_proposed(const std::vector<Complex>& s, std::size_t n_tt, std::size_t sp_tt) {
    double acc = 0;
    for (std::size_t tt = 0; tt < n_tt; ++tt) acc += naive_unbiased_k(&s[tt * sp_tt], sp_tt, static_cast<double>(sp_tt));
    return acc / n_tt;
}

inline double naive_lit_turntable(const std::vector<Complex>& s, std::size_t n_tt, std::size_t sp_tt) {
    double unstirred = 0, stirred = 0;
    for (std::size_t tt = 0; tt < n_tt; ++tt) {
        Complex m = 0;
        for (std::size_t i = 0; i < sp_tt; ++i) m += s[tt * sp_tt + i];
        m /= double(sp_tt);
        double v = 0;
        for (std::size_t i = 0; i < sp_tt; ++i) v += std::norm(s[tt * sp_tt + i] - m);
        unstirred += std::norm(m);
        stirred += v / (sp_tt - 1);
    }
    return unstirred / stirred;
}

inline double naive_lit_no_turntable(const std::vector<Complex>& s) {
    return naive_unbiased_k(s.data(), s.size(), static_cast<double>(s.size()));
}

inline double naive_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline double percentile(std::vector<double> v, double q) {
    std::sort(v.begin(), v.end());
    const double pos = q * (v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - lo) * (v[hi] - v[lo]);
}

// Distribution of the uncertainty u_dB (all placements) for a campaign of `gains.size()`
// measurements, each G_ref a mean of n_samples Rician powers scaled by its gain.
// Student-t coverage factors are passed in from tables so nothing here depends on the library.
inline std::vector<double> u_db_distribution(const std::vector<double>& gains, double k_linear, std::size_t n_samples,
                                             double kp, std::size_t campaigns, std::uint64_t seed) {
    RicianSource src(seed);
    const double sigma = std::sqrt(1.0 / (1.0 + k_linear) / 2.0);
    const double v = std::sqrt(k_linear / (1.0 + k_linear));
    std::normal_distribution<double> normal(0.0, sigma);
    std::vector<double> out;
    out.reserve(campaigns);
    for (std::size_t c = 0; c < campaigns; ++c) {
        std::vector<double> g(gains.size());
        for (std::size_t m = 0; m < gains.size(); ++m) {
            double acc = 0;
            for (std::size_t i = 0; i < n_samples; ++i) {
                // |S|^2 does not depend on the LOS phase, so phase 0 is used.
                const double re = v + normal(src.engine());
                const double im = normal(src.engine());
                acc += re * re + im * im;
            }
            g[m] = gains[m] * acc / n_samples;
        }
        double mean = 0;
        for (double x : g) mean += x;
        mean /= g.size();
        double ss = 0;
        for (double x : g) ss += (x - mean) * (x - mean);
        const double s = std::sqrt(ss / (g.size() - 1));
        out.push_back(10.0 * std::log10((mean + s * kp) / mean));
    }
    return out;
}

}  // namespace oracle
