#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hype/error.hpp"
#include "hype/series.hpp"
#include "hype/special.hpp"

namespace hype::stats {

/// Arithmetic mean, accumulated relative to the first element so that a
/// constant sample returns that constant exactly.
inline double mean(std::span<const double> x) {
    if (x.empty()) throw UsageError("mean: empty sample");
    const double origin = x.front();
    double sum = 0.0;
    for (double v : x) sum += v - origin;
    return origin + sum / static_cast<double>(x.size());
}

/// Sample variance (n-1 denominator), two-pass.
inline double variance(std::span<const double> x) {
    if (x.size() < 2) throw UsageError("variance: need at least 2 points");
    const double m = mean(x);
    double ss = 0.0;
    for (double v : x) ss += (v - m) * (v - m);
    return ss / static_cast<double>(x.size() - 1);
}

inline double stddev(std::span<const double> x) { return std::sqrt(variance(x)); }

template <DatedValues S>
std::string label_of(const S& s) {
    if constexpr (requires { s.entity; }) {
        return s.entity;
    } else if constexpr (requires { s.name; }) {
        return s.name;
    } else {
        return {};
    }
}

/// (v_t - v_{t-1}) / v_{t-1}, starting at the second date.
inline HypeSeries pct_change(const HypeSeries& series) {
    if (series.size() < 2) throw UsageError("pct_change: need at least 2 observations");
    HypeSeries out{series.entity, SeriesKind::pct_change, {}, {}};
    out.dates.reserve(series.size() - 1);
    out.values.reserve(series.size() - 1);
    for (std::size_t t = 1; t < series.size(); ++t) {
        const double prev = series.values[t - 1];
        if (prev == 0.0) {
            throw NumericalError("pct_change: zero value on " + series.dates[t - 1].str() + " for " + series.entity);
        }
        out.dates.push_back(series.dates[t]);
        out.values.push_back((series.values[t] - prev) / prev);
    }
    return out;
}

struct RollingMeanStd {
    HypeSeries mean;  ///< every date, partial prefix during warm-up
    HypeSeries std;   ///< from the second date on (sample std needs two points)
};

inline RollingMeanStd rolling_mean_std(const HypeSeries& series, std::size_t window) {
    if (window < 2) throw UsageError("rolling_mean_std: window must be >= 2");
    RollingMeanStd out{HypeSeries{series.entity, SeriesKind::smoothed, series.dates, {}},
                       HypeSeries{series.entity, SeriesKind::rolling_std, {}, {}}};
    out.mean.values.reserve(series.size());
    const std::span<const double> v(series.values);
    for (std::size_t t = 0; t < series.size(); ++t) {
        const std::size_t first = t + 1 >= window ? t + 1 - window : 0;
        const auto win = v.subspan(first, t + 1 - first);
        out.mean.values.push_back(mean(win));
        if (win.size() >= 2) {
            out.std.dates.push_back(series.dates[t]);
            out.std.values.push_back(stddev(win));
        }
    }
    return out;
}

/// Sample Pearson coefficient of two equal-length samples.
inline double pearson_corr(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw UsageError("pearson_corr: samples differ in length");
    if (a.size() < 3) throw ValidationError("pearson_corr: need at least 3 paired observations");
    const double ma = mean(a);
    const double mb = mean(b);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa == 0.0 || sbb == 0.0) throw NumericalError("pearson_corr: constant input, correlation undefined");
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

/// Pairs the values of two dated series on their common dates.
template <DatedValues A, DatedValues B>
std::pair<std::vector<double>, std::vector<double>> align(const A& a, const B& b, std::vector<Date>* dates = nullptr) {
    std::pair<std::vector<double>, std::vector<double>> out;
    std::size_t i = 0, j = 0;
    while (i < a.dates.size() && j < b.dates.size()) {
        if (a.dates[i] < b.dates[j]) {
            ++i;
        } else if (b.dates[j] < a.dates[i]) {
            ++j;
        } else {
            out.first.push_back(a.values[i]);
            out.second.push_back(b.values[j]);
            if (dates) dates->push_back(a.dates[i]);
            ++i;
            ++j;
        }
    }
    return out;
}

/// Pearson coefficient over the intersection of the two date sets.
template <DatedValues A, DatedValues B>
double pearson_corr(const A& a, const B& b) {
    const auto [x, y] = align(a, b);
    if (x.size() < 3) throw AlignmentError("pearson_corr: fewer than 3 common dates");
    return pearson_corr(std::span<const double>(x), std::span<const double>(y));
}

struct RegressionFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
    double p_slope = 1.0;
    double p_intercept = 1.0;
    double stderr_slope = 0.0;
    double stderr_intercept = 0.0;
    std::size_t n = 0;
};

namespace detail {
inline double two_sided_p(double coef, double se, double df) {
    if (se == 0.0) return coef == 0.0 ? 1.0 : 0.0;
    return special::student_t_two_sided(coef / se, df);
}
}  // namespace detail

/// Ordinary least squares y = intercept + slope * x with t-test p-values (n-2 df).
inline RegressionFit linear_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw UsageError("linear_fit: x and y differ in length");
    const std::size_t n = x.size();
    if (n < 3) throw ValidationError("linear_fit: need at least 3 observations");
    const double mx = mean(x);
    const double my = mean(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw NumericalError("linear_fit: constant x, singular design");

    RegressionFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.intercept + fit.slope * x[i]);
        sse += r * r;
    }
    fit.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;

    const double df = static_cast<double>(n - 2);
    const double s2 = sse / df;
    fit.stderr_slope = std::sqrt(s2 / sxx);
    fit.stderr_intercept = std::sqrt(s2 * (1.0 / static_cast<double>(n) + mx * mx / sxx));
    fit.p_slope = detail::two_sided_p(fit.slope, fit.stderr_slope, df);
    fit.p_intercept = detail::two_sided_p(fit.intercept, fit.stderr_intercept, df);
    return fit;
}

struct PowerFit {
    double coefficient = 0.0;  ///< c in y = c * x^k
    double exponent = 0.0;     ///< k
    double r_squared_log = 0.0;
    std::size_t n = 0;
    RegressionFit log_fit;  ///< the underlying ln y on ln x regression
};

/// Fits y = c * x^k by OLS of ln y on ln x.
inline PowerFit power_fit(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw UsageError("power_fit: x and y differ in length");
    std::vector<double> lx(x.size()), ly(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw DomainError("power_fit: observation " + std::to_string(i) + " is not strictly positive");
        }
        lx[i] = std::log(x[i]);
        ly[i] = std::log(y[i]);
    }
    PowerFit fit;
    fit.log_fit = linear_fit(lx, ly);
    fit.coefficient = std::exp(fit.log_fit.intercept);
    fit.exponent = fit.log_fit.slope;
    fit.r_squared_log = fit.log_fit.r_squared;
    fit.n = fit.log_fit.n;
    return fit;
}

/// Trailing sample std of `window` consecutive log returns. The first value is
/// dated at the window-th return.
template <DatedValues S>
HypeSeries log_return_rolling_std(const S& prices, std::size_t window = 5) {
    if (window < 2) throw UsageError("log_return_rolling_std: window must be >= 2");
    const std::size_t n = prices.values.size();
    if (n < window + 1) {
        throw ValidationError("log_return_rolling_std: need at least " + std::to_string(window + 1) + " prices");
    }
    for (std::size_t t = 0; t < n; ++t) {
        if (!(prices.values[t] > 0.0)) {
            throw DomainError("log_return_rolling_std: nonpositive price on " + prices.dates[t].str());
        }
    }
    std::vector<double> r(n - 1);
    for (std::size_t t = 1; t < n; ++t) r[t - 1] = std::log(prices.values[t] / prices.values[t - 1]);
    HypeSeries out{label_of(prices), SeriesKind::rolling_std, {}, {}};
    const std::span<const double> rs(r);
    for (std::size_t k = window - 1; k < r.size(); ++k) {
        out.dates.push_back(prices.dates[k + 1]);
        out.values.push_back(stddev(rs.subspan(k + 1 - window, window)));
    }
    return out;
}

}  // namespace hype::stats
