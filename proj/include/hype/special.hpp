#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "hype/error.hpp"

/// Special functions behind the test statistics: normal tails, regularized
/// incomplete beta, Student-t tails, and the Kolmogorov limit distribution.
namespace hype::special {

inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

inline double normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// log Phi(x), accurate in the far lower tail where Phi underflows.
inline double normal_logcdf(double x) {
    if (x > -30.0) return std::log(normal_cdf(x));
    // Mills-ratio asymptotic: Phi(x) ~ phi(x)/|x| * (1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8)
    const double r = 1.0 / (x * x);
    return -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * std::numbers::pi) +
           std::log1p(r * (-1.0 + r * (3.0 + r * (-15.0 + r * 105.0))));
}

inline double normal_logsf(double x) { return normal_logcdf(-x); }

/// Normal quantile, Beasley-Springer AS 111. This is the approximation AS R94
/// specifies for the Shapiro-Wilk coefficients; its ~1e-7 error is part of that
/// algorithm's definition, so it is kept instead of a more accurate quantile.
inline double ppnd_as111(double p) {
    constexpr double a0 = 2.50662823884, a1 = -18.61500062529, a2 = 41.39119773534, a3 = -25.44106049637;
    constexpr double b1 = -8.47351093090, b2 = 23.08336743743, b3 = -21.06224101826, b4 = 3.13082909833;
    constexpr double c0 = -2.78718931138, c1 = -2.29796479134, c2 = 4.85014127135, c3 = 2.32121276858;
    constexpr double d1 = 3.54388924762, d2 = 1.63706781897;
    const double q = p - 0.5;
    if (std::abs(q) <= 0.42) {
        const double r = q * q;
        return q * (((a3 * r + a2) * r + a1) * r + a0) / ((((b4 * r + b3) * r + b2) * r + b1) * r + 1.0);
    }
    double r = q > 0 ? 1.0 - p : p;
    if (r <= 0.0) return 0.0;
    r = std::sqrt(-std::log(r));
    const double v = (((c3 * r + c2) * r + c1) * r + c0) / ((d2 * r + d1) * r + 1.0);
    return q < 0 ? -v : v;
}

namespace detail {

/// Continued fraction for I_x(a, b) (modified Lentz), valid for x < (a+1)/(a+b+2).
inline double betacf(double a, double b, double x) {
    constexpr double tiny = 1e-300;
    constexpr double eps = 1e-16;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 10000; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) return h;
    }
    throw NumericalError("incomplete beta continued fraction did not converge");
}

}  // namespace detail

/// Regularized incomplete beta I_x(a, b). `one_minus_x` lets callers pass 1-x
/// without cancellation.
inline double incomplete_beta(double a, double b, double x, double one_minus_x) {
    if (!(a > 0.0) || !(b > 0.0)) throw NumericalError("incomplete_beta: shape parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (one_minus_x <= 0.0) return 1.0;
    const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) +
                             b * std::log(one_minus_x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::betacf(a, b, x) / a;
    return 1.0 - front * detail::betacf(b, a, one_minus_x) / b;
}

inline double incomplete_beta(double a, double b, double x) { return incomplete_beta(a, b, x, 1.0 - x); }

/// P(T > t) for Student t with `df` degrees of freedom.
inline double student_t_sf(double t, double df) {
    if (!(df > 0.0)) throw NumericalError("student_t_sf: df must be positive");
    if (std::isinf(t)) return t > 0 ? 0.0 : 1.0;
    const double t2 = t * t;
    const double tail = 0.5 * incomplete_beta(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2));
    return t >= 0.0 ? tail : 1.0 - tail;
}

/// P(|T| >= |t|).
inline double student_t_two_sided(double t, double df) {
    if (!(df > 0.0)) throw NumericalError("student_t_two_sided: df must be positive");
    if (std::isinf(t)) return 0.0;
    const double t2 = t * t;
    return incomplete_beta(0.5 * df, 0.5, df / (df + t2), t2 / (df + t2));
}

/// Chi-square survival function with two degrees of freedom.
inline double chi2_sf_df2(double x) { return x <= 0.0 ? 1.0 : std::exp(-0.5 * x); }

/// Survival function of the Kolmogorov limit distribution, P(K > x).
inline double kolmogorov_sf(double x) {
    if (!(x > 0.0)) return 1.0;
    if (x < 1.0) {
        // Jacobi-theta form of the CDF converges fast for small x.
        const double w = std::numbers::pi * std::numbers::pi / (8.0 * x * x);
        double cdf = 0.0;
        for (int k = 1; k <= 64; k += 2) {
            const double term = std::exp(-w * k * k);
            cdf += term;
            if (term < 1e-300) break;
        }
        cdf *= std::sqrt(2.0 * std::numbers::pi) / x;
        return 1.0 - cdf;
    }
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += (k % 2 == 1) ? term : -term;
        if (term < 1e-300) break;
    }
    return std::fmin(1.0, std::fmax(0.0, 2.0 * sum));
}

}  // namespace hype::special
