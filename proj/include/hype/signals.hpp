#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hype/error.hpp"
#include "hype/index.hpp"
#include "hype/series.hpp"
#include "hype/stats.hpp"

namespace hype {

/// Baseline (sample mean) and the series' deviation from it.
struct NeutralityState {
    std::string entity;
    double baseline = 1.0;
    HypeSeries deviation;
};

inline NeutralityState hype_neutrality(const HypeSeries& series) {
    if (series.empty()) throw UsageError("hype_neutrality: empty series " + series.entity);
    NeutralityState st{series.entity, stats::mean(series.values), series};
    for (double& v : st.deviation.values) v -= st.baseline;
    return st;
}

struct MomentumSeries {
    std::string entity;
    std::size_t window = 7;
    std::vector<Date> dates;
    std::vector<double> values;  ///< deviation units per trading day
};

/// Rolling OLS slope of deviation on the time index over each full trailing window.
inline MomentumSeries hype_momentum(const NeutralityState& st, std::size_t window = 7) {
    if (window < 2) throw UsageError("hype_momentum: window must be >= 2");
    const auto& dev = st.deviation;
    if (dev.size() < window) {
        throw ValidationError("hype_momentum: series " + st.entity + " shorter than window " + std::to_string(window));
    }
    MomentumSeries out{st.entity, window, {}, {}};
    const double w = static_cast<double>(window);
    const double xbar = (w - 1.0) / 2.0;
    double sxx = 0.0;
    for (std::size_t j = 0; j < window; ++j) sxx += (static_cast<double>(j) - xbar) * (static_cast<double>(j) - xbar);
    const std::span<const double> v(dev.values);
    for (std::size_t t = window - 1; t < dev.size(); ++t) {
        const auto win = v.subspan(t + 1 - window, window);
        const double ybar = stats::mean(win);
        double sxy = 0.0;
        for (std::size_t j = 0; j < window; ++j) sxy += (static_cast<double>(j) - xbar) * (win[j] - ybar);
        out.dates.push_back(dev.dates[t]);
        out.values.push_back(sxy / sxx);
    }
    return out;
}

enum class Direction { peak, trough };

inline std::string_view to_string(Direction d) noexcept { return d == Direction::peak ? "peak" : "trough"; }

struct EventFlag {
    Date date;
    std::string entity;
    double z_score = 0.0;
    Direction direction = Direction::peak;
};

struct EventScan {
    std::vector<EventFlag> flags;
    std::size_t skipped_zero_std = 0;  ///< dates whose trailing window was constant
};

inline constexpr double kDefaultZThreshold = 2.5;
inline constexpr std::size_t kDefaultBaselineWindow = 21;

/// Trailing z-score of each value against the `baseline_window` values before it.
inline EventScan detect_events(const HypeSeries& series, double z_threshold = kDefaultZThreshold,
                               std::size_t baseline_window = kDefaultBaselineWindow) {
    if (!(z_threshold > 0.0)) throw UsageError("detect_events: z threshold must be > 0");
    if (baseline_window < 2) throw UsageError("detect_events: baseline window must be >= 2");
    if (series.size() <= baseline_window) {
        throw ValidationError("detect_events: series " + series.entity + " has " + std::to_string(series.size()) +
                              " points, needs more than the baseline window " + std::to_string(baseline_window));
    }
    EventScan scan;
    const std::span<const double> v(series.values);
    for (std::size_t t = baseline_window; t < series.size(); ++t) {
        const auto win = v.subspan(t - baseline_window, baseline_window);
        const double sd = stats::stddev(win);
        if (!(sd > 0.0)) {
            ++scan.skipped_zero_std;
            continue;
        }
        const double z = (v[t] - stats::mean(win)) / sd;
        if (std::abs(z) >= z_threshold) {
            scan.flags.push_back({series.dates[t], series.entity, z, z > 0 ? Direction::peak : Direction::trough});
        }
    }
    return scan;
}

struct ComparisonRow {
    Date date;
    double hype_level;
    double hype_change;      ///< smoothed first difference
    double hype_pct_change;  ///< smoothed relative change
    double external_level;
    double external_change;  ///< smoothed first difference
};

struct Comparison {
    std::string hype_entity;
    std::string external_name;
    std::size_t window = 7;
    std::vector<ComparisonRow> rows;
    double change_correlation = 0.0;
};

/// Aligns both series on their common dates and smooths levels and day-over-day
/// changes with the trailing mean. Rows start at the second common date.
template <DatedValues H, DatedValues E>
Comparison compare_external(const H& hype, const E& external, std::size_t window = 7) {
    if (window == 0) throw UsageError("compare_external: window must be >= 1");
    std::vector<Date> common;
    auto [hv, ev] = stats::align(hype, external, &common);
    const std::string hname = stats::label_of(hype);
    const std::string ename = stats::label_of(external);
    if (common.empty()) throw AlignmentError("compare_external: " + hname + " and " + ename + " share no dates");
    if (common.size() < window || common.size() < 4) {
        throw AlignmentError("compare_external: only " + std::to_string(common.size()) + " common dates for " + hname +
                             " and " + ename);
    }
    auto as_series = [&](std::vector<double> vals, std::vector<Date> dates) {
        return HypeSeries{hname, SeriesKind::raw, std::move(dates), std::move(vals)};
    };
    const std::vector<Date> rest(common.begin() + 1, common.end());
    std::vector<double> hd, hp, ed;
    for (std::size_t t = 1; t < common.size(); ++t) {
        hd.push_back(hv[t] - hv[t - 1]);
        ed.push_back(ev[t] - ev[t - 1]);
        hp.push_back(hv[t - 1] != 0.0 ? (hv[t] - hv[t - 1]) / hv[t - 1] : std::nan(""));
    }
    const auto hl = smooth(as_series(hv, common), window);
    const auto el = smooth(as_series(ev, common), window);
    const auto hds = smooth(as_series(hd, rest), window);
    const auto hps = smooth(as_series(hp, rest), window);
    const auto eds = smooth(as_series(ed, rest), window);

    Comparison out{hname, ename, window, {}, 0.0};
    for (std::size_t k = 0; k < rest.size(); ++k) {
        out.rows.push_back({rest[k], hl.values[k + 1], hds.values[k], hps.values[k], el.values[k + 1], eds.values[k]});
    }
    out.change_correlation = stats::pearson_corr(std::span<const double>(hds.values), std::span<const double>(eds.values));
    return out;
}

}  // namespace hype
