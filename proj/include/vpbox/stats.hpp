// Summary statistics: mean, sample variance, Student-t confidence intervals.
#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "vpbox/common.hpp"

namespace vpbox::stats {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw NumericError("mean of empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

// Unbiased sample standard deviation (n-1 denominator).
inline double sample_std(std::span<const double> xs) {
    size_t n = xs.size();
    if (n < 2) return 0.0;
    double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(n - 1));
}

namespace detail {

// log Gamma via Lanczos approximation, good to ~1e-15 for x > 0.
inline double log_gamma(double x) {
    static const double g[] = {676.5203681218851,     -1259.1392167224028,  771.32342877765313,
                               -176.61502916214059,   12.507343278686905,   -0.13857109526572012,
                               9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // Reflection formula.
        return std::log(3.141592653589793238462643 / std::sin(3.141592653589793238462643 * x)) -
               log_gamma(1.0 - x);
    }
    x -= 1.0;
    double a = 0.99999999999980993;
    double t = x + 7.5;
    for (int i = 0; i < 8; ++i) a += g[i] / (x + static_cast<double>(i) + 1.0);
    return 0.5 * std::log(2.0 * 3.141592653589793238462643) + (x + 0.5) * std::log(t) - t +
           std::log(a);
}

// Regularized incomplete beta I_x(a, b), continued fraction (Lentz).
inline double incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_beta = log_gamma(a) + log_gamma(b) - log_gamma(a + b);
    const double front = std::exp(a * std::log(x) + b * std::log(1.0 - x) - ln_beta);
    // Use the symmetry relation to stay in the rapidly converging regime.
    if (x > (a + 1.0) / (a + b + 2.0)) return 1.0 - incomplete_beta(b, a, 1.0 - x);

    const double tiny = 1e-300;
    double c = 1.0;
    double d = 1.0 - (a + b) * x / (a + 1.0);
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 400; ++m) {
        double dm = static_cast<double>(m);
        double num = dm * (b - dm) * x / ((a + 2.0 * dm - 1.0) * (a + 2.0 * dm));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        num = -(a + dm) * (a + b + dm) * x / ((a + 2.0 * dm) * (a + 2.0 * dm + 1.0));
        d = 1.0 + num * d;
        if (std::fabs(d) < tiny) d = tiny;
        c = 1.0 + num / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) break;
    }
    return front * h / a;
}

}  // namespace detail

// CDF of Student's t with df degrees of freedom.
inline double student_t_cdf(double t, double df) {
    if (df <= 0.0) throw NumericError("student_t_cdf: df must be positive");
    double x = df / (df + t * t);
    double p = 0.5 * detail::incomplete_beta(0.5 * df, 0.5, x);
    return t > 0.0 ? 1.0 - p : p;
}

// Quantile of Student's t, bisection refined by Newton steps to ~1e-14.
inline double student_t_quantile(double p, double df) {
    if (p <= 0.0 || p >= 1.0) throw NumericError("student_t_quantile: p must be in (0,1)");
    if (p == 0.5) return 0.0;
    double lo = -1e3, hi = 1e3;
    double t = 0.0;
    for (int i = 0; i < 200; ++i) {
        t = 0.5 * (lo + hi);
        if (student_t_cdf(t, df) < p)
            lo = t;
        else
            hi = t;
        if (hi - lo < 1e-12 * std::max(1.0, std::fabs(t))) break;
    }
    // Polish with Newton using the t density.
    for (int i = 0; i < 4; ++i) {
        double f = student_t_cdf(t, df) - p;
        double log_pdf = detail::log_gamma(0.5 * (df + 1.0)) - detail::log_gamma(0.5 * df) -
                         0.5 * std::log(df * 3.141592653589793238462643) -
                         0.5 * (df + 1.0) * std::log1p(t * t / df);
        t -= f / std::exp(log_pdf);
    }
    return t;
}

struct MeanCi {
    double mean = 0.0;
    double half_width = 0.0;  // 95% CI half width: t(0.975, n-1) * s / sqrt(n)
    size_t n = 0;
};

// Two-sided 95% confidence interval for the mean of xs, Student-t based.
inline MeanCi mean_ci95(std::span<const double> xs) {
    MeanCi out;
    out.n = xs.size();
    out.mean = mean(xs);
    if (xs.size() < 2) return out;
    double s = sample_std(xs);
    if (s == 0.0) return out;  // zero variance -> zero width, exactly
    double t = student_t_quantile(0.975, static_cast<double>(xs.size() - 1));
    out.half_width = t * s / std::sqrt(static_cast<double>(xs.size()));
    return out;
}

}  // namespace vpbox::stats
