#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "hype/error.hpp"
#include "hype/special.hpp"
#include "hype/stats.hpp"

namespace hype::stats {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
};

struct CriticalValue {
    double significance_pct;  ///< 15, 10, 5, 2.5, 1
    double value;
};

/// Anderson-Darling reports the statistic against critical values, no p-value.
struct AndersonDarlingResult {
    double statistic = 0.0;
    std::vector<CriticalValue> critical_values;

    /// The critical value at `pct`, or NaN if the table lacks it.
    [[nodiscard]] double critical_at(double pct) const {
        for (const auto& cv : critical_values) {
            if (cv.significance_pct == pct) return cv.value;
        }
        return std::nan("");
    }
};

struct NormalityReport {
    std::size_t n = 0;
    TestResult shapiro_wilk;
    TestResult dagostino_k2;
    TestResult jarque_bera;
    AndersonDarlingResult anderson_darling;
    TestResult kolmogorov_smirnov;
};

inline constexpr std::size_t kMinNormalitySample = 20;

namespace detail {

struct Moments {
    double mean;
    double m2;  // biased central moments
    double m3;
    double m4;
};

inline Moments central_moments(std::span<const double> x) {
    const double m = mean(x);
    double s2 = 0.0, s3 = 0.0, s4 = 0.0;
    for (double v : x) {
        const double d = v - m;
        const double d2 = d * d;
        s2 += d2;
        s3 += d2 * d;
        s4 += d2 * d2;
    }
    const double n = static_cast<double>(x.size());
    return {m, s2 / n, s3 / n, s4 / n};
}

inline double poly(std::span<const double> c, double x) {
    double r = 0.0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * x + c[i];
    return r;
}

}  // namespace detail

/// Shapiro-Wilk W with Royston's approximation (AS R94), 20 <= n <= 5000.
inline TestResult shapiro_wilk(std::span<const double> sample) {
    const std::size_t n = sample.size();
    if (n < kMinNormalitySample) throw ValidationError("shapiro_wilk: need n >= 20");
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double range = x.back() - x.front();
    if (!(range > 0.0)) throw NumericalError("shapiro_wilk: sample has zero range");

    // Half-vector of coefficients for the lower order statistics (a[0] pairs with x[n-1]).
    const std::size_t half = n / 2;
    const double an = static_cast<double>(n);
    std::vector<double> a(half);
    double summ2 = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        a[i] = special::ppnd_as111((static_cast<double>(i + 1) - 0.375) / (an + 0.25));
        summ2 += a[i] * a[i];
    }
    summ2 *= 2.0;
    const double ssumm2 = std::sqrt(summ2);
    const double rsn = 1.0 / std::sqrt(an);
    constexpr std::array c1 = {0.0, 0.221157, -0.147981, -2.07119, 4.434685, -2.706056};
    constexpr std::array c2 = {0.0, 0.042981, -0.293762, -1.752461, 5.682633, -3.582633};
    const double a1 = detail::poly(c1, rsn) - a[0] / ssumm2;
    const double a2 = -a[1] / ssumm2 + detail::poly(c2, rsn);
    const double fac = std::sqrt((summ2 - 2.0 * a[0] * a[0] - 2.0 * a[1] * a[1]) / (1.0 - 2.0 * a1 * a1 - 2.0 * a2 * a2));
    a[0] = a1;
    a[1] = a2;
    for (std::size_t i = 2; i < half; ++i) a[i] = -a[i] / fac;

    // W is the squared correlation between the antisymmetric coefficient
    // vector and the ordered sample.
    std::vector<double> coef(n, 0.0);
    for (std::size_t i = 0; i < half; ++i) {
        coef[i] = -a[i];
        coef[n - 1 - i] = a[i];
    }
    std::vector<double> xs(n);
    for (std::size_t i = 0; i < n; ++i) xs[i] = x[i] / range;
    const double ma = mean(coef);
    const double mx = mean(xs);
    double ssa = 0.0, ssx = 0.0, sax = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = coef[i] - ma;
        const double dx = xs[i] - mx;
        ssa += da * da;
        ssx += dx * dx;
        sax += da * dx;
    }
    const double ssassx = std::sqrt(ssa * ssx);
    const double w1 = (ssassx - sax) * (ssassx + sax) / (ssa * ssx);
    const double w = 1.0 - w1;

    constexpr std::array c5 = {-1.5861, -0.31082, -0.083751, 0.0038915};
    constexpr std::array c6 = {-0.4803, -0.082676, 0.0030302};
    const double ln_n = std::log(an);
    const double mu = detail::poly(c5, ln_n);
    const double sigma = std::exp(detail::poly(c6, ln_n));
    const double p = special::normal_sf((std::log(w1) - mu) / sigma);
    return {w, std::clamp(p, 0.0, 1.0)};
}

/// D'Agostino-Pearson omnibus K^2 = Z(skew)^2 + Z(kurtosis)^2, chi-square 2 df.
inline TestResult dagostino_k2(std::span<const double> sample) {
    const double n = static_cast<double>(sample.size());
    if (sample.size() < kMinNormalitySample) throw ValidationError("dagostino_k2: need n >= 20");
    const auto mo = detail::central_moments(sample);
    if (!(mo.m2 > 0.0)) throw NumericalError("dagostino_k2: zero variance");
    const double b1 = mo.m3 / std::pow(mo.m2, 1.5);
    const double b2 = mo.m4 / (mo.m2 * mo.m2);

    // Skewness transform.
    const double y = b1 * std::sqrt((n + 1.0) * (n + 3.0) / (6.0 * (n - 2.0)));
    const double beta2 = 3.0 * (n * n + 27.0 * n - 70.0) * (n + 1.0) * (n + 3.0) /
                         ((n - 2.0) * (n + 5.0) * (n + 7.0) * (n + 9.0));
    const double w2 = -1.0 + std::sqrt(2.0 * (beta2 - 1.0));
    const double delta = 1.0 / std::sqrt(0.5 * std::log(w2));
    const double alpha = std::sqrt(2.0 / (w2 - 1.0));
    const double z_skew = delta * std::asinh(y / alpha);

    // Kurtosis transform (Anscombe-Glynn).
    const double e = 3.0 * (n - 1.0) / (n + 1.0);
    const double var_b2 = 24.0 * n * (n - 2.0) * (n - 3.0) / ((n + 1.0) * (n + 1.0) * (n + 3.0) * (n + 5.0));
    const double xk = (b2 - e) / std::sqrt(var_b2);
    const double sqrt_beta1 = 6.0 * (n * n - 5.0 * n + 2.0) / ((n + 7.0) * (n + 9.0)) *
                              std::sqrt(6.0 * (n + 3.0) * (n + 5.0) / (n * (n - 2.0) * (n - 3.0)));
    const double big_a = 6.0 + 8.0 / sqrt_beta1 * (2.0 / sqrt_beta1 + std::sqrt(1.0 + 4.0 / (sqrt_beta1 * sqrt_beta1)));
    const double term1 = 1.0 - 2.0 / (9.0 * big_a);
    const double denom = 1.0 + xk * std::sqrt(2.0 / (big_a - 4.0));
    if (denom == 0.0) throw NumericalError("dagostino_k2: kurtosis transform undefined");
    const double term2 = std::copysign(std::cbrt((1.0 - 2.0 / big_a) / std::abs(denom)), denom);
    const double z_kurt = (term1 - term2) / std::sqrt(2.0 / (9.0 * big_a));

    const double k2 = z_skew * z_skew + z_kurt * z_kurt;
    return {k2, special::chi2_sf_df2(k2)};
}

/// Jarque-Bera n/6 (S^2 + (K-3)^2/4) with biased moment ratios.
inline TestResult jarque_bera(std::span<const double> sample) {
    const double n = static_cast<double>(sample.size());
    if (sample.size() < kMinNormalitySample) throw ValidationError("jarque_bera: need n >= 20");
    const auto mo = detail::central_moments(sample);
    if (!(mo.m2 > 0.0)) throw NumericalError("jarque_bera: zero variance");
    const double s = mo.m3 / std::pow(mo.m2, 1.5);
    const double k = mo.m4 / (mo.m2 * mo.m2);
    const double jb = n / 6.0 * (s * s + 0.25 * (k - 3.0) * (k - 3.0));
    return {jb, special::chi2_sf_df2(jb)};
}

/// Anderson-Darling A^2 against a normal with estimated mean and (n-1) std.
/// Critical values are the Stephens table scaled by 1 + 4/n - 25/n^2 and
/// rounded to three decimals.
inline AndersonDarlingResult anderson_darling(std::span<const double> sample) {
    const std::size_t n = sample.size();
    if (n < kMinNormalitySample) throw ValidationError("anderson_darling: need n >= 20");
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double m = mean(x);
    const double s = stddev(x);
    if (!(s > 0.0)) throw NumericalError("anderson_darling: zero variance");
    const double dn = static_cast<double>(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double zi = (x[i] - m) / s;
        const double zr = (x[n - 1 - i] - m) / s;
        sum += (2.0 * static_cast<double>(i + 1) - 1.0) / dn * (special::normal_logcdf(zi) + special::normal_logsf(zr));
    }
    AndersonDarlingResult out;
    out.statistic = -dn - sum;
    constexpr std::array<std::pair<double, double>, 5> table = {
        {{15.0, 0.576}, {10.0, 0.656}, {5.0, 0.787}, {2.5, 0.918}, {1.0, 1.092}}};
    const double scale = 1.0 + 4.0 / dn - 25.0 / (dn * dn);
    for (const auto& [pct, base] : table) {
        out.critical_values.push_back({pct, std::round(base / scale * 1000.0) / 1000.0});
    }
    return out;
}

/// Two-sided KS distance to N(mean, std) with both parameters estimated from
/// the sample; asymptotic Kolmogorov p-value with no Lilliefors correction.
inline TestResult kolmogorov_smirnov(std::span<const double> sample) {
    const std::size_t n = sample.size();
    if (n < kMinNormalitySample) throw ValidationError("kolmogorov_smirnov: need n >= 20");
    std::vector<double> x(sample.begin(), sample.end());
    std::sort(x.begin(), x.end());
    const double m = mean(x);
    const double s = stddev(x);
    if (!(s > 0.0)) throw NumericalError("kolmogorov_smirnov: zero variance");
    const double dn = static_cast<double>(n);
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = special::normal_cdf((x[i] - m) / s);
        d = std::max({d, static_cast<double>(i + 1) / dn - f, f - static_cast<double>(i) / dn});
    }
    return {d, special::kolmogorov_sf(d * std::sqrt(dn))};
}

inline NormalityReport normality_suite(std::span<const double> sample) {
    if (sample.size() < kMinNormalitySample) {
        throw ValidationError("normality_suite: need at least 20 observations, got " + std::to_string(sample.size()));
    }
    if (variance(sample) == 0.0) throw NumericalError("normality_suite: degenerate sample (zero variance)");
    NormalityReport r;
    r.n = sample.size();
    r.shapiro_wilk = shapiro_wilk(sample);
    r.dagostino_k2 = dagostino_k2(sample);
    r.jarque_bera = jarque_bera(sample);
    r.anderson_darling = anderson_darling(sample);
    r.kolmogorov_smirnov = kolmogorov_smirnov(sample);
    return r;
}

}  // namespace hype::stats
