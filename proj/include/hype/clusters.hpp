#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hype/error.hpp"
#include "hype/series.hpp"
#include "hype/stats.hpp"

namespace hype {

enum class ClusterMethod { thresholds, kmeans1d };

inline std::string_view to_string(ClusterMethod m) noexcept {
    return m == ClusterMethod::thresholds ? "thresholds" : "kmeans1d";
}

inline ClusterMethod parse_cluster_method(std::string_view s) {
    if (s == "thresholds") return ClusterMethod::thresholds;
    if (s == "kmeans1d") return ClusterMethod::kmeans1d;
    throw UsageError("unknown classification method '" + std::string(s) + "' (thresholds|kmeans1d)");
}

using EntityValues = std::vector<std::pair<std::string, double>>;

struct ClusterGroup {
    std::string label;
    std::vector<std::string> members;  ///< descending by period average
    double group_mean = 0.0;
};

/// Groups ordered from highest to lowest hype.
struct ClusterAssignment {
    std::vector<ClusterGroup> groups;
    ClusterMethod method = ClusterMethod::thresholds;

    [[nodiscard]] std::optional<std::size_t> group_of(std::string_view entity) const {
        for (std::size_t g = 0; g < groups.size(); ++g) {
            for (const auto& m : groups[g].members) {
                if (m == entity) return g;
            }
        }
        return std::nullopt;
    }
};

inline std::vector<std::string> default_labels(SeriesKind kind) {
    if (kind == SeriesKind::cap_adjusted) return {"Relatively Hyped", "Moderately Hyped", "Less Prominent"};
    return {"Over-Hyped", "Neutral-Hyped", "Under-Hyped"};
}

struct ClassifyOptions {
    std::size_t k = 3;
    ClusterMethod method = ClusterMethod::kmeans1d;
    std::vector<double> cutpoints;    ///< thresholds only: k-1 strictly decreasing values
    std::vector<std::string> labels;  ///< empty: "Group 1".."Group k"
};

inline double period_average(const HypeSeries& series) {
    if (series.empty()) throw UsageError("period_average: empty series " + series.entity);
    return stats::mean(series.values);
}

namespace detail {

/// Optimal ordered k-partition of `v` (sorted descending) minimizing the
/// within-group sum of squares. Returns the start index of each group.
/// Cuts fall only between distinct values so tied entities share a group.
inline std::vector<std::size_t> kmeans1d_breaks(std::span<const double> v, std::size_t k) {
    const std::size_t n = v.size();
    // Centered prefix sums keep the SS differences well conditioned.
    const double shift = stats::mean(v);
    std::vector<double> s1(n + 1, 0.0), s2(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = v[i] - shift;
        s1[i + 1] = s1[i] + d;
        s2[i + 1] = s2[i] + d * d;
    }
    auto ss = [&](std::size_t a, std::size_t b) {  // [a, b)
        const double m = static_cast<double>(b - a);
        const double sum = s1[b] - s1[a];
        return std::max(0.0, s2[b] - s2[a] - sum * sum / m);
    };
    auto cut_ok = [&](std::size_t i) { return i == 0 || i == n || v[i - 1] != v[i]; };

    constexpr double inf = std::numeric_limits<double>::infinity();
    // cost[g][i]: best SS for the first i values split into g groups.
    std::vector<std::vector<double>> cost(k + 1, std::vector<double>(n + 1, inf));
    std::vector<std::vector<std::size_t>> arg(k + 1, std::vector<std::size_t>(n + 1, 0));
    cost[0][0] = 0.0;
    for (std::size_t g = 1; g <= k; ++g) {
        for (std::size_t i = g; i <= n; ++i) {
            if (!cut_ok(i)) continue;
            for (std::size_t j = g - 1; j < i; ++j) {
                if (!cut_ok(j) || cost[g - 1][j] == inf) continue;
                const double c = cost[g - 1][j] + ss(j, i);
                if (c < cost[g][i]) {
                    cost[g][i] = c;
                    arg[g][i] = j;
                }
            }
        }
    }
    if (cost[k][n] == inf) throw ValidationError("kmeans1d: no admissible partition");
    std::vector<std::size_t> starts(k);
    std::size_t i = n;
    for (std::size_t g = k; g >= 1; --g) {
        starts[g - 1] = arg[g][i];
        i = arg[g][i];
    }
    return starts;
}

}  // namespace detail

/// Partitions entities into k ordered hype groups by their period averages.
inline ClusterAssignment classify(const EntityValues& averages, const ClassifyOptions& opt = {}) {
    const std::size_t k = opt.k;
    if (k == 0) throw UsageError("classify: k must be >= 1");
    if (!opt.labels.empty() && opt.labels.size() != k) {
        throw UsageError("classify: expected " + std::to_string(k) + " labels, got " + std::to_string(opt.labels.size()));
    }
    std::set<std::string> names;
    std::set<double> distinct;
    for (const auto& [e, v] : averages) {
        if (!std::isfinite(v)) throw NumericalError("classify: non-finite average for " + e);
        if (!names.insert(e).second) throw ValidationError("classify: duplicate entity " + e);
        distinct.insert(v);
    }
    if (distinct.size() < k) {
        throw ValidationError("classify: degenerate partition, " + std::to_string(distinct.size()) +
                              " distinct value(s) for k = " + std::to_string(k));
    }

    EntityValues sorted = averages;
    std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.second > b.second; });

    ClusterAssignment out;
    out.method = opt.method;
    out.groups.resize(k);
    for (std::size_t g = 0; g < k; ++g) {
        out.groups[g].label = opt.labels.empty() ? "Group " + std::to_string(g + 1) : opt.labels[g];
    }

    if (opt.method == ClusterMethod::thresholds) {
        const auto& cp = opt.cutpoints;
        if (cp.size() != k - 1) {
            throw UsageError("classify: thresholds method needs " + std::to_string(k - 1) + " cutpoints, got " +
                             std::to_string(cp.size()));
        }
        for (std::size_t i = 1; i < cp.size(); ++i) {
            if (!(cp[i] < cp[i - 1])) throw UsageError("classify: cutpoints must be strictly decreasing");
        }
        for (const auto& [e, v] : sorted) {
            std::size_t g = 0;
            while (g < cp.size() && v < cp[g]) ++g;
            out.groups[g].members.push_back(e);
        }
    } else {
        std::vector<double> vals;
        vals.reserve(sorted.size());
        for (const auto& p : sorted) vals.push_back(p.second);
        const auto starts = detail::kmeans1d_breaks(vals, k);
        for (std::size_t g = 0; g < k; ++g) {
            const std::size_t end = g + 1 < k ? starts[g + 1] : sorted.size();
            for (std::size_t i = starts[g]; i < end; ++i) out.groups[g].members.push_back(sorted[i].first);
        }
    }

    std::map<std::string, double> lookup(averages.begin(), averages.end());
    for (auto& grp : out.groups) {
        if (grp.members.empty()) throw ValidationError("classify: group '" + grp.label + "' is empty");
        double sum = 0.0;
        for (const auto& m : grp.members) sum += lookup[m];
        grp.group_mean = sum / static_cast<double>(grp.members.size());
    }
    return out;
}

/// Unweighted mean of member averages for each group, in group order.
inline std::vector<double> cluster_averages(const ClusterAssignment& assignment, const EntityValues& averages) {
    std::map<std::string, double> lookup(averages.begin(), averages.end());
    std::vector<double> out;
    out.reserve(assignment.groups.size());
    for (const auto& grp : assignment.groups) {
        if (grp.members.empty()) throw ValidationError("cluster_averages: group '" + grp.label + "' is empty");
        double sum = 0.0;
        for (const auto& m : grp.members) {
            const auto it = lookup.find(m);
            if (it == lookup.end()) throw ValidationError("cluster_averages: no average for member " + m);
            sum += it->second;
        }
        out.push_back(sum / static_cast<double>(grp.members.size()));
    }
    return out;
}

/// Builds an assignment straight from given memberships (published tables, saved runs).
inline ClusterAssignment assignment_from(const std::vector<std::pair<std::string, std::vector<std::string>>>& groups,
                                         const EntityValues& averages, ClusterMethod method = ClusterMethod::thresholds) {
    ClusterAssignment a;
    a.method = method;
    for (const auto& [label, members] : groups) a.groups.push_back({label, members, 0.0});
    const auto means = cluster_averages(a, averages);
    for (std::size_t g = 0; g < means.size(); ++g) a.groups[g].group_mean = means[g];
    return a;
}

struct BandSeries {
    std::string label;
    std::vector<Date> dates;
    std::vector<double> mean;
    std::vector<double> std;
    std::vector<double> lower;
    std::vector<double> upper;
};

/// Per-date cross-member mean and sample std; band is mean +- std.
inline BandSeries cluster_band(const std::vector<HypeSeries>& members, std::string label = {}) {
    if (members.size() < 2) throw NumericalError("cluster_band: need >= 2 members for a sample std");
    const auto& dates = members.front().dates;
    for (const auto& m : members) {
        if (m.dates != dates) throw AlignmentError("cluster_band: member " + m.entity + " misaligned");
    }
    BandSeries b{std::move(label), dates, {}, {}, {}, {}};
    std::vector<double> col(members.size());
    for (std::size_t t = 0; t < dates.size(); ++t) {
        for (std::size_t i = 0; i < members.size(); ++i) col[i] = members[i].values[t];
        const double m = stats::mean(col);
        const double s = stats::stddev(col);
        b.mean.push_back(m);
        b.std.push_back(s);
        b.lower.push_back(m - s);
        b.upper.push_back(m + s);
    }
    return b;
}

}  // namespace hype
