#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hype/error.hpp"
#include "hype/ingest.hpp"
#include "hype/series.hpp"

namespace hype {

enum class Level { ticker, sector };

inline std::string_view to_string(Level l) noexcept { return l == Level::ticker ? "ticker" : "sector"; }

enum class NormalizeMode {
    daily,    ///< divide by each date's cross-entity mean
    overall,  ///< divide by one grand mean over all entities and dates
};

inline std::string_view to_string(NormalizeMode m) noexcept { return m == NormalizeMode::daily ? "daily" : "overall"; }

/// Market-cap weights per (date, entity); each row sums to one.
struct WeightPanel {
    TradingCalendar calendar;
    std::vector<std::string> entities;
    std::vector<double> weights;

    [[nodiscard]] double at(std::size_t t, std::size_t i) const { return weights[t * entities.size() + i]; }

    [[nodiscard]] std::optional<std::size_t> entity_index(std::string_view e) const {
        for (std::size_t i = 0; i < entities.size(); ++i) {
            if (entities[i] == e) return i;
        }
        return std::nullopt;
    }
};

/// Ticker share of the day's total mentions.
inline SeriesSet hype_index(const CountPanel& counts) {
    const std::size_t nd = counts.calendar.size();
    const std::size_t nt = counts.tickers.size();
    std::vector<double> totals(nd, 0.0);
    for (std::size_t t = 0; t < nd; ++t) {
        long long total = 0;
        for (std::size_t i = 0; i < nt; ++i) total += counts.at(t, i);
        if (total <= 0) {
            throw NumericalError("hype_index: zero total news on " + counts.calendar[t].str());
        }
        totals[t] = static_cast<double>(total);
    }
    SeriesSet out;
    out.reserve(nt);
    for (std::size_t i = 0; i < nt; ++i) {
        HypeSeries s{counts.tickers[i].str(), SeriesKind::raw, counts.calendar.dates(), {}};
        s.values.resize(nd);
        for (std::size_t t = 0; t < nd; ++t) s.values[t] = static_cast<double>(counts.at(t, i)) / totals[t];
        out.push_back(std::move(s));
    }
    return out;
}

/// Sums member ticker indices into one series per sector (canonical sector order).
inline SeriesSet sector_hype_index(const SeriesSet& ticker_series, const SectorMap& sectors) {
    if (ticker_series.empty()) throw UsageError("sector_hype_index: no ticker series");
    const auto& dates = ticker_series.front().dates;
    std::map<std::string, HypeSeries> by_sector;
    for (const auto& s : ticker_series) {
        if (s.dates != dates) throw AlignmentError("sector_hype_index: ticker series " + s.entity + " misaligned");
        const auto sector = sectors.sector_of(Ticker::parse(s.entity));
        if (!sector) throw ValidationError("sector_hype_index: ticker " + s.entity + " not in sector map");
        auto [it, fresh] = by_sector.try_emplace(*sector, HypeSeries{*sector, s.kind, dates, {}});
        if (fresh) it->second.values.assign(dates.size(), 0.0);
        for (std::size_t t = 0; t < dates.size(); ++t) it->second.values[t] += s.values[t];
    }
    SeriesSet out;
    for (auto name : kSectorNames) {
        if (auto it = by_sector.find(std::string(name)); it != by_sector.end()) out.push_back(std::move(it->second));
    }
    return out;
}

inline WeightPanel market_cap_weight(const ValuePanel& caps, Level level, const SectorMap* sectors = nullptr) {
    const std::size_t nd = caps.calendar.size();
    const std::size_t nt = caps.tickers.size();
    if (nt == 0) throw UsageError("market_cap_weight: panel has no tickers");
    if (level == Level::sector && sectors == nullptr) {
        throw UsageError("market_cap_weight: sector level requires a sector map");
    }

    std::vector<std::string> entities;
    std::vector<std::size_t> column_of(nt, 0);
    if (level == Level::ticker) {
        for (std::size_t i = 0; i < nt; ++i) {
            entities.push_back(caps.tickers[i].str());
            column_of[i] = i;
        }
    } else {
        std::map<std::string, bool> present;
        for (const auto& tk : caps.tickers) {
            const auto sector = sectors->sector_of(tk);
            if (!sector) throw ValidationError("market_cap_weight: ticker " + tk.str() + " not in sector map");
            present[*sector] = true;
        }
        for (auto name : kSectorNames) {
            if (present.count(std::string(name))) entities.emplace_back(name);
        }
        for (std::size_t i = 0; i < nt; ++i) {
            const auto sector = *sectors->sector_of(caps.tickers[i]);
            for (std::size_t j = 0; j < entities.size(); ++j) {
                if (entities[j] == sector) column_of[i] = j;
            }
        }
    }

    WeightPanel w{caps.calendar, entities, std::vector<double>(nd * entities.size(), 0.0)};
    for (std::size_t t = 0; t < nd; ++t) {
        double total = 0.0;
        for (std::size_t i = 0; i < nt; ++i) {
            const double v = caps.at(t, i);
            if (!(v > 0.0)) {
                throw ValidationError("market_cap_weight: nonpositive cap for " + caps.tickers[i].str() + " on " +
                                      caps.calendar[t].str());
            }
            total += v;
        }
        for (std::size_t i = 0; i < nt; ++i) {
            w.weights[t * entities.size() + column_of[i]] += caps.at(t, i) / total;
        }
    }
    return w;
}

/// News share divided by market-cap weight on each date.
inline HypeSeries cap_hype_index(const HypeSeries& hype, const WeightPanel& weights) {
    const auto col = weights.entity_index(hype.entity);
    if (!col) throw AlignmentError("cap_hype_index: no weights for entity " + hype.entity);
    HypeSeries out{hype.entity, SeriesKind::cap_adjusted, hype.dates, std::vector<double>(hype.size())};
    for (std::size_t k = 0; k < hype.size(); ++k) {
        const auto t = weights.calendar.index_of(hype.dates[k]);
        if (!t) {
            throw AlignmentError("cap_hype_index: no weight for " + hype.entity + " on " + hype.dates[k].str());
        }
        const double w = weights.at(*t, *col);
        if (!(w > 0.0)) {
            throw NumericalError("cap_hype_index: zero weight for " + hype.entity + " on " + hype.dates[k].str());
        }
        out.values[k] = hype.values[k] / w;
    }
    return out;
}

inline SeriesSet cap_hype_index(const SeriesSet& hype, const WeightPanel& weights) {
    SeriesSet out;
    out.reserve(hype.size());
    for (const auto& s : hype) out.push_back(cap_hype_index(s, weights));
    return out;
}

inline SeriesSet normalize(const SeriesSet& set, NormalizeMode mode) {
    if (set.empty()) throw UsageError("normalize: empty series set");
    SeriesSet out = set;
    for (auto& s : out) s.kind = SeriesKind::normalized;

    if (mode == NormalizeMode::overall) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& s : set) {
            for (double v : s.values) sum += v;
            n += s.size();
        }
        if (n == 0 || !(sum / static_cast<double>(n) > 0.0)) {
            throw NumericalError("normalize: grand mean of the panel is not positive");
        }
        const double mean = sum / static_cast<double>(n);
        for (auto& s : out) {
            for (double& v : s.values) v /= mean;
        }
        return out;
    }

    const auto& dates = set.front().dates;
    for (const auto& s : set) {
        if (s.dates != dates) throw AlignmentError("normalize: series " + s.entity + " misaligned");
    }
    const double n = static_cast<double>(set.size());
    for (std::size_t t = 0; t < dates.size(); ++t) {
        double sum = 0.0;
        for (const auto& s : set) sum += s.values[t];
        const double mean = sum / n;
        if (!(mean > 0.0)) throw NumericalError("normalize: cross-entity mean is zero on " + dates[t].str());
        for (auto& s : out) s.values[t] /= mean;
    }
    return out;
}

/// Trailing mean over the last `window` points; the first window-1 use the partial prefix.
inline HypeSeries smooth(const HypeSeries& series, std::size_t window = 7) {
    if (window == 0) throw UsageError("smooth: window must be >= 1");
    HypeSeries out{series.entity, SeriesKind::smoothed, series.dates, std::vector<double>(series.size())};
    for (std::size_t i = 0; i < series.size(); ++i) {
        const std::size_t first = i + 1 >= window ? i + 1 - window : 0;
        double sum = 0.0;
        for (std::size_t j = first; j <= i; ++j) sum += series.values[j];
        out.values[i] = sum / static_cast<double>(i + 1 - first);
    }
    return out;
}

}  // namespace hype
