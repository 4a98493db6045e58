#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hype/csv.hpp"
#include "hype/date.hpp"
#include "hype/error.hpp"

namespace hype {

/// Exchange-qualified instrument code, rendered "symbol.suffix" (NVDA.O, JPM.N).
struct Ticker {
    std::string symbol;
    std::string suffix;

    /// Splits at the last '.'; both parts must be nonempty.
    static Ticker parse(std::string_view text) {
        const auto dot = text.rfind('.');
        if (dot == std::string_view::npos || dot == 0 || dot + 1 == text.size()) {
            throw ValidationError("malformed ticker '" + std::string(text) + "' (expected symbol.suffix)");
        }
        return Ticker{std::string(text.substr(0, dot)), std::string(text.substr(dot + 1))};
    }

    [[nodiscard]] std::string str() const { return symbol + "." + suffix; }

    friend auto operator<=>(const Ticker&, const Ticker&) = default;
};

struct HeadlineRecord {
    Date date;
    Ticker ticker;
    std::optional<std::string> story_id;

    friend bool operator==(const HeadlineRecord&, const HeadlineRecord&) = default;
};

enum class HeadlineFormat { csv, jsonl };

/// Strictly increasing, nonempty list of session dates.
class TradingCalendar {
public:
    TradingCalendar() = default;

    explicit TradingCalendar(std::vector<Date> dates) : dates_(std::move(dates)) {
        if (dates_.empty()) throw ValidationError("trading calendar is empty");
        for (std::size_t i = 1; i < dates_.size(); ++i) {
            if (!(dates_[i - 1] < dates_[i])) {
                throw ValidationError("trading calendar not strictly increasing at " + dates_[i].str());
            }
        }
    }

    /// Monday-to-Friday sessions in [first, last].
    static TradingCalendar weekdays(Date first, Date last) {
        std::vector<Date> out;
        for (Date d = first; d <= last; d = d + 1) {
            if (!d.is_weekend()) out.push_back(d);
        }
        return TradingCalendar(std::move(out));
    }

    [[nodiscard]] std::size_t size() const noexcept { return dates_.size(); }
    [[nodiscard]] const Date& operator[](std::size_t i) const { return dates_[i]; }
    [[nodiscard]] const std::vector<Date>& dates() const noexcept { return dates_; }
    [[nodiscard]] const Date& front() const { return dates_.front(); }
    [[nodiscard]] const Date& back() const { return dates_.back(); }

    [[nodiscard]] std::optional<std::size_t> index_of(Date d) const {
        const auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
        if (it == dates_.end() || *it != d) return std::nullopt;
        return static_cast<std::size_t>(it - dates_.begin());
    }

    /// Index of the first session on or after `d`; nullopt past the end.
    [[nodiscard]] std::optional<std::size_t> roll_forward(Date d) const {
        const auto it = std::lower_bound(dates_.begin(), dates_.end(), d);
        if (it == dates_.end()) return std::nullopt;
        return static_cast<std::size_t>(it - dates_.begin());
    }

    friend bool operator==(const TradingCalendar&, const TradingCalendar&) = default;

private:
    std::vector<Date> dates_;
};

/// Daily mention counts, rectangular over calendar x tickers (row-major by date).
struct CountPanel {
    TradingCalendar calendar;
    std::vector<Ticker> tickers;
    std::vector<long long> counts;

    [[nodiscard]] long long at(std::size_t t, std::size_t i) const { return counts[t * tickers.size() + i]; }
    long long& at(std::size_t t, std::size_t i) { return counts[t * tickers.size() + i]; }

    friend bool operator==(const CountPanel&, const CountPanel&) = default;
};

/// Real-valued panel; for market caps every cell is strictly positive (USD).
struct ValuePanel {
    TradingCalendar calendar;
    std::vector<Ticker> tickers;
    std::vector<double> values;

    [[nodiscard]] double at(std::size_t t, std::size_t i) const { return values[t * tickers.size() + i]; }

    [[nodiscard]] std::optional<std::size_t> ticker_index(const Ticker& tk) const {
        const auto it = std::find(tickers.begin(), tickers.end(), tk);
        if (it == tickers.end()) return std::nullopt;
        return static_cast<std::size_t>(it - tickers.begin());
    }

    friend bool operator==(const ValuePanel&, const ValuePanel&) = default;
};

/// GICS sector names in canonical (reporting) order.
inline constexpr std::array<std::string_view, 11> kSectorNames = {
    "Communication",  "Consumer Discretionary", "Consumer Staples", "Energy",
    "Financials",     "Health Care",            "Industrials",      "Information Technology",
    "Materials",      "Real Estate",            "Utilities",
};

inline std::optional<std::string> canonical_sector(std::string_view name) {
    if (name == "Communication Services") return std::string("Communication");
    for (auto s : kSectorNames) {
        if (s == name) return std::string(s);
    }
    return std::nullopt;
}

class SectorMap {
public:
    SectorMap() = default;

    void add(const Ticker& ticker, const std::string& sector, std::size_t line = 0) {
        const auto canonical = canonical_sector(sector);
        if (!canonical) {
            std::string allowed;
            for (auto s : kSectorNames) {
                if (!allowed.empty()) allowed += ", ";
                allowed += s;
            }
            throw ValidationError("unknown sector '" + sector + "'; allowed: " + allowed, line);
        }
        if (index_.count(ticker)) throw ValidationError("duplicate ticker " + ticker.str(), line);
        index_.emplace(ticker, entries_.size());
        entries_.emplace_back(ticker, *canonical);
    }

    [[nodiscard]] std::optional<std::string> sector_of(const Ticker& ticker) const {
        const auto it = index_.find(ticker);
        if (it == index_.end()) return std::nullopt;
        return entries_[it->second].second;
    }

    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] const std::vector<std::pair<Ticker, std::string>>& entries() const noexcept { return entries_; }

    [[nodiscard]] std::vector<Ticker> tickers() const {
        std::vector<Ticker> out;
        out.reserve(entries_.size());
        for (const auto& [t, s] : entries_) out.push_back(t);
        return out;
    }

    /// Sectors with at least one member, canonical order.
    [[nodiscard]] std::vector<std::string> sectors() const {
        std::vector<std::string> out;
        const auto counts = sector_counts();
        for (auto s : kSectorNames) {
            if (counts.count(std::string(s))) out.emplace_back(s);
        }
        return out;
    }

    [[nodiscard]] std::map<std::string, std::size_t> sector_counts() const {
        std::map<std::string, std::size_t> out;
        for (const auto& [t, s] : entries_) ++out[s];
        return out;
    }

private:
    std::vector<std::pair<Ticker, std::string>> entries_;
    std::map<Ticker, std::size_t> index_;
};

struct ExternalSeries {
    std::string name;
    std::vector<Date> dates;
    std::vector<double> values;
};

// ---------------------------------------------------------------------------
// Parsers

inline std::vector<HeadlineRecord> parse_headlines(std::istream& in, HeadlineFormat format) {
    std::vector<HeadlineRecord> out;
    if (format == HeadlineFormat::csv) {
        const auto table = csv::read(in);
        const auto date_col = table.require("date");
        const auto ticker_col = table.require("ticker");
        const auto story_col = table.find("story_id");
        out.reserve(table.rows.size());
        for (const auto& row : table.rows) {
            HeadlineRecord rec;
            try {
                rec.date = Date::parse(row.fields[date_col]);
                rec.ticker = Ticker::parse(row.fields[ticker_col]);
            } catch (const ValidationError& e) {
                throw ValidationError(e.what(), row.line);
            }
            if (story_col && !row.fields[*story_col].empty()) rec.story_id = row.fields[*story_col];
            out.push_back(std::move(rec));
        }
        return out;
    }

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (csv::trim(line).empty()) continue;
        nlohmann::json obj;
        try {
            obj = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error&) {
            throw ValidationError("invalid JSON", line_no);
        }
        if (!obj.is_object()) throw ValidationError("expected a JSON object", line_no);
        if (!obj.contains("ticker")) throw SchemaError("line " + std::to_string(line_no) + ": missing field 'ticker'");
        if (!obj.contains("date")) throw SchemaError("line " + std::to_string(line_no) + ": missing field 'date'");
        if (!obj["date"].is_string() || !obj["ticker"].is_string()) {
            throw ValidationError("'date' and 'ticker' must be strings", line_no);
        }
        HeadlineRecord rec;
        try {
            rec.date = Date::parse(obj["date"].get<std::string>());
            rec.ticker = Ticker::parse(obj["ticker"].get<std::string>());
        } catch (const ValidationError& e) {
            throw ValidationError(e.what(), line_no);
        }
        if (auto it = obj.find("story_id"); it != obj.end() && !it->is_null()) {
            rec.story_id = it->is_string() ? it->get<std::string>() : it->dump();
        }
        out.push_back(std::move(rec));
    }
    return out;
}

/// Bookkeeping from aggregate_counts. counted + skipped + dropped == records.
struct AggregationDiagnostics {
    std::size_t records = 0;
    std::size_t counted = 0;
    std::size_t rolled_forward = 0;
    std::size_t skipped_outside_universe = 0;
    std::size_t dropped_after_calendar = 0;
    std::set<std::string> unknown_tickers;
};

struct AggregateResult {
    CountPanel panel;
    AggregationDiagnostics diagnostics;
};

inline AggregateResult aggregate_counts(const std::vector<HeadlineRecord>& records,
                                        const TradingCalendar& calendar,
                                        const std::vector<Ticker>& universe) {
    if (universe.empty()) throw UsageError("aggregate_counts: universe is empty");
    std::map<Ticker, std::size_t> column;
    for (std::size_t i = 0; i < universe.size(); ++i) {
        if (!column.emplace(universe[i], i).second) {
            throw ValidationError("duplicate ticker in universe: " + universe[i].str());
        }
    }

    AggregateResult result;
    auto& panel = result.panel;
    auto& diag = result.diagnostics;
    panel.calendar = calendar;
    panel.tickers = universe;
    panel.counts.assign(calendar.size() * universe.size(), 0);
    diag.records = records.size();

    for (const auto& rec : records) {
        const auto col = column.find(rec.ticker);
        if (col == column.end()) {
            ++diag.skipped_outside_universe;
            diag.unknown_tickers.insert(rec.ticker.str());
            continue;
        }
        const auto row = calendar.roll_forward(rec.date);
        if (!row) {
            ++diag.dropped_after_calendar;
            continue;
        }
        if (calendar[*row] != rec.date) ++diag.rolled_forward;
        ++panel.at(*row, col->second);
        ++diag.counted;
    }
    return result;
}

namespace detail {

struct LongPanel {
    std::vector<Date> dates;
    std::vector<Ticker> tickers;
    std::map<std::pair<std::size_t, std::size_t>, std::pair<std::string, std::size_t>> cells;  // -> (text, line)
};

inline LongPanel read_long_panel(const csv::Table& table, std::string_view value_column) {
    const auto date_col = table.require("date");
    const auto ticker_col = table.require("ticker");
    const auto value_col = table.require(value_column);

    LongPanel lp;
    std::set<Date> date_set;
    std::map<Ticker, std::size_t> ticker_pos;
    std::vector<std::tuple<Date, std::size_t, std::string, std::size_t>> raw;
    for (const auto& row : table.rows) {
        Date d;
        Ticker tk;
        try {
            d = Date::parse(row.fields[date_col]);
            tk = Ticker::parse(row.fields[ticker_col]);
        } catch (const ValidationError& e) {
            throw ValidationError(e.what(), row.line);
        }
        date_set.insert(d);
        auto [it, fresh] = ticker_pos.emplace(tk, lp.tickers.size());
        if (fresh) lp.tickers.push_back(tk);
        raw.emplace_back(d, it->second, row.fields[value_col], row.line);
    }
    lp.dates.assign(date_set.begin(), date_set.end());
    for (auto& [d, ti, text, line] : raw) {
        const auto di = static_cast<std::size_t>(std::lower_bound(lp.dates.begin(), lp.dates.end(), d) - lp.dates.begin());
        if (!lp.cells.emplace(std::pair{di, ti}, std::pair{text, line}).second) {
            throw ValidationError("duplicate cell (" + d.str() + ", " + lp.tickers[ti].str() + ")", line);
        }
    }
    if (lp.dates.empty()) throw ValidationError("panel has no rows");

    const std::size_t expected = lp.dates.size() * lp.tickers.size();
    if (lp.cells.size() != expected) {
        std::string gaps;
        std::size_t listed = 0;
        for (std::size_t t = 0; t < lp.dates.size() && listed < 10; ++t) {
            for (std::size_t i = 0; i < lp.tickers.size() && listed < 10; ++i) {
                if (!lp.cells.count({t, i})) {
                    if (listed) gaps += "; ";
                    gaps += "(" + lp.dates[t].str() + "," + lp.tickers[i].str() + ")";
                    ++listed;
                }
            }
        }
        throw ValidationError("panel not rectangular; " + std::to_string(expected - lp.cells.size()) +
                              " missing cell(s): " + gaps);
    }
    return lp;
}

}  // namespace detail

/// Long-format `date,ticker,market_cap`. Tickers keep first-appearance order.
inline ValuePanel parse_value_panel(std::istream& in) {
    const auto table = csv::read(in);
    const auto lp = detail::read_long_panel(table, "market_cap");
    ValuePanel panel;
    panel.calendar = TradingCalendar(lp.dates);
    panel.tickers = lp.tickers;
    panel.values.resize(lp.cells.size());
    for (const auto& [key, cell] : lp.cells) {
        const double v = csv::parse_double(cell.first, cell.second, "market_cap");
        if (!(v > 0.0)) throw ValidationError("market_cap must be > 0, got " + cell.first, cell.second);
        panel.values[key.first * lp.tickers.size() + key.second] = v;
    }
    return panel;
}

/// Long-format `date,ticker,count`, the serialized form of a CountPanel.
inline CountPanel parse_count_panel(std::istream& in) {
    const auto table = csv::read(in);
    const auto lp = detail::read_long_panel(table, "count");
    CountPanel panel;
    panel.calendar = TradingCalendar(lp.dates);
    panel.tickers = lp.tickers;
    panel.counts.resize(lp.cells.size());
    for (const auto& [key, cell] : lp.cells) {
        const auto v = csv::parse_int(cell.first, cell.second, "count");
        if (v < 0) throw ValidationError("count must be >= 0", cell.second);
        panel.counts[key.first * lp.tickers.size() + key.second] = v;
    }
    return panel;
}

inline SectorMap parse_sector_map(std::istream& in) {
    const auto table = csv::read(in);
    const auto ticker_col = table.require("ticker");
    const auto sector_col = table.require("sector");
    SectorMap map;
    for (const auto& row : table.rows) {
        Ticker tk;
        try {
            tk = Ticker::parse(row.fields[ticker_col]);
        } catch (const ValidationError& e) {
            throw ValidationError(e.what(), row.line);
        }
        map.add(tk, row.fields[sector_col], row.line);
    }
    return map;
}

/// Single `ticker` column.
inline std::vector<Ticker> parse_universe(std::istream& in) {
    const auto table = csv::read(in);
    const auto col = table.require("ticker");
    std::vector<Ticker> out;
    std::set<Ticker> seen;
    for (const auto& row : table.rows) {
        Ticker tk;
        try {
            tk = Ticker::parse(row.fields[col]);
        } catch (const ValidationError& e) {
            throw ValidationError(e.what(), row.line);
        }
        if (!seen.insert(tk).second) throw ValidationError("duplicate ticker " + tk.str(), row.line);
        out.push_back(tk);
    }
    return out;
}

/// `date,value`; a two-column file with another value header (e.g. `date,score`) is accepted.
inline ExternalSeries parse_external_series(std::istream& in, std::string name) {
    const auto table = csv::read(in);
    const auto date_col = table.require("date");
    std::size_t value_col;
    if (auto v = table.find("value")) {
        value_col = *v;
    } else if (table.header.size() == 2) {
        value_col = date_col == 0 ? 1 : 0;
    } else {
        throw SchemaError("missing required column 'value'");
    }
    ExternalSeries series{std::move(name), {}, {}};
    for (const auto& row : table.rows) {
        Date d;
        try {
            d = Date::parse(row.fields[date_col]);
        } catch (const ValidationError& e) {
            throw ValidationError(e.what(), row.line);
        }
        if (!series.dates.empty() && !(series.dates.back() < d)) {
            throw ValidationError(series.dates.back() == d ? "duplicate date " + d.str()
                                                           : "dates not increasing at " + d.str(),
                                  row.line);
        }
        series.dates.push_back(d);
        series.values.push_back(csv::parse_double(row.fields[value_col], row.line, "value"));
    }
    return series;
}

// ---------------------------------------------------------------------------
// Writers (canonical CSV forms; the parsers above read them back)

inline void write_count_panel(std::ostream& out, const CountPanel& p) {
    out << "date,ticker,count\n";
    for (std::size_t t = 0; t < p.calendar.size(); ++t) {
        const auto d = p.calendar[t].str();
        for (std::size_t i = 0; i < p.tickers.size(); ++i) {
            out << d << ',' << p.tickers[i].str() << ',' << p.at(t, i) << '\n';
        }
    }
}

inline void write_value_panel(std::ostream& out, const ValuePanel& p) {
    out << "date,ticker,market_cap\n";
    for (std::size_t t = 0; t < p.calendar.size(); ++t) {
        const auto d = p.calendar[t].str();
        for (std::size_t i = 0; i < p.tickers.size(); ++i) {
            out << d << ',' << p.tickers[i].str() << ',' << csv::format_number(p.at(t, i)) << '\n';
        }
    }
}

inline void write_sector_map(std::ostream& out, const SectorMap& m) {
    out << "ticker,sector\n";
    for (const auto& [t, s] : m.entries()) csv::write_row(out, {t.str(), s});
}

inline void write_headlines(std::ostream& out, const std::vector<HeadlineRecord>& records) {
    out << "date,ticker,story_id\n";
    for (const auto& r : records) csv::write_row(out, {r.date.str(), r.ticker.str(), r.story_id.value_or("")});
}

inline void write_external_series(std::ostream& out, const ExternalSeries& s) {
    out << "date,value\n";
    for (std::size_t i = 0; i < s.dates.size(); ++i) {
        out << s.dates[i].str() << ',' << csv::format_number(s.values[i]) << '\n';
    }
}

/// Restricts a panel to `tickers` (in that order) and dates within [first, last].
inline ValuePanel select(const ValuePanel& p, const std::vector<Ticker>& tickers,
                         std::optional<Date> first = std::nullopt, std::optional<Date> last = std::nullopt) {
    std::vector<std::size_t> cols;
    for (const auto& tk : tickers) {
        const auto idx = p.ticker_index(tk);
        if (!idx) throw ValidationError("market-cap panel has no data for ticker " + tk.str());
        cols.push_back(*idx);
    }
    std::vector<std::size_t> rows;
    std::vector<Date> dates;
    for (std::size_t t = 0; t < p.calendar.size(); ++t) {
        const Date d = p.calendar[t];
        if ((first && d < *first) || (last && *last < d)) continue;
        rows.push_back(t);
        dates.push_back(d);
    }
    if (rows.empty()) throw ValidationError("no market-cap dates inside the requested range");
    ValuePanel out;
    out.calendar = TradingCalendar(std::move(dates));
    out.tickers = tickers;
    out.values.reserve(rows.size() * cols.size());
    for (auto t : rows) {
        for (auto i : cols) out.values.push_back(p.at(t, i));
    }
    return out;
}

}  // namespace hype
