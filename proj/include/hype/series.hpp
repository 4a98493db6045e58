#pragma once

#include <concepts>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hype/csv.hpp"
#include "hype/date.hpp"
#include "hype/error.hpp"

namespace hype {

enum class SeriesKind {
    raw,
    normalized,
    cap_adjusted,
    pct_change,
    smoothed,
    rolling_std,
    weight,
    deviation,
    momentum,
};

inline std::string_view to_string(SeriesKind k) noexcept {
    switch (k) {
    case SeriesKind::raw: return "raw";
    case SeriesKind::normalized: return "normalized";
    case SeriesKind::cap_adjusted: return "cap_adjusted";
    case SeriesKind::pct_change: return "pct_change";
    case SeriesKind::smoothed: return "smoothed";
    case SeriesKind::rolling_std: return "rolling_std";
    case SeriesKind::weight: return "weight";
    case SeriesKind::deviation: return "deviation";
    case SeriesKind::momentum: return "momentum";
    }
    return "unknown";
}

inline SeriesKind parse_series_kind(std::string_view s) {
    for (auto k : {SeriesKind::raw, SeriesKind::normalized, SeriesKind::cap_adjusted, SeriesKind::pct_change,
                   SeriesKind::smoothed, SeriesKind::rolling_std, SeriesKind::weight, SeriesKind::deviation,
                   SeriesKind::momentum}) {
        if (to_string(k) == s) return k;
    }
    throw ValidationError("unknown series kind '" + std::string(s) + "'");
}

/// Dated values for one entity (ticker or sector).
struct HypeSeries {
    std::string entity;
    SeriesKind kind = SeriesKind::raw;
    std::vector<Date> dates;
    std::vector<double> values;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
    [[nodiscard]] bool empty() const noexcept { return values.empty(); }

    friend bool operator==(const HypeSeries&, const HypeSeries&) = default;
};

using SeriesSet = std::vector<HypeSeries>;

/// Anything carrying parallel `dates` and `values` vectors.
template <class S>
concept DatedValues = requires(const S& s) {
    { s.dates } -> std::convertible_to<std::vector<Date>>;
    { s.values } -> std::convertible_to<std::vector<double>>;
};

/// Checks strictly increasing dates and matching lengths.
template <DatedValues S>
void validate_dates(const S& s, std::string_view what) {
    if (s.dates.size() != s.values.size()) {
        throw ValidationError(std::string(what) + ": dates and values differ in length");
    }
    for (std::size_t i = 1; i < s.dates.size(); ++i) {
        if (!(s.dates[i - 1] < s.dates[i])) {
            throw ValidationError(std::string(what) + ": dates not strictly increasing at " + s.dates[i].str());
        }
    }
}

/// Export form: `entity,kind,date,value`, 12 significant digits.
inline void write_series_csv(std::ostream& out, const SeriesSet& set) {
    out << "entity,kind,date,value\n";
    for (const auto& s : set) {
        const auto kind = std::string(to_string(s.kind));
        const auto entity = csv::escape(s.entity);
        for (std::size_t i = 0; i < s.size(); ++i) {
            out << entity << ',' << kind << ',' << s.dates[i].str() << ',' << csv::format_number(s.values[i]) << '\n';
        }
    }
}

/// Reads `entity,kind,date,value`; series appear in first-seen (entity, kind) order.
inline SeriesSet parse_series_csv(std::istream& in) {
    const auto table = csv::read(in);
    const auto e_col = table.require("entity");
    const auto k_col = table.require("kind");
    const auto d_col = table.require("date");
    const auto v_col = table.require("value");
    SeriesSet out;
    std::map<std::pair<std::string, std::string>, std::size_t> index;
    for (const auto& row : table.rows) {
        const auto key = std::pair{row.fields[e_col], row.fields[k_col]};
        auto [it, fresh] = index.emplace(key, out.size());
        if (fresh) {
            SeriesKind kind;
            try {
                kind = parse_series_kind(key.second);
            } catch (const ValidationError& e) {
                throw ValidationError(e.what(), row.line);
            }
            out.push_back(HypeSeries{key.first, kind, {}, {}});
        }
        auto& s = out[it->second];
        Date d;
        try {
            d = Date::parse(row.fields[d_col]);
        } catch (const ValidationError& e) {
            throw ValidationError(e.what(), row.line);
        }
        if (!s.dates.empty() && !(s.dates.back() < d)) {
            throw ValidationError("dates not increasing for " + s.entity, row.line);
        }
        s.dates.push_back(d);
        s.values.push_back(csv::parse_double(row.fields[v_col], row.line, "value"));
    }
    return out;
}

inline const HypeSeries* find_series(const SeriesSet& set, std::string_view entity) {
    for (const auto& s : set) {
        if (s.entity == entity) return &s;
    }
    return nullptr;
}

}  // namespace hype
