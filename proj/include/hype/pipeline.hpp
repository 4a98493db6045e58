#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hype/clusters.hpp"
#include "hype/config.hpp"
#include "hype/error.hpp"
#include "hype/index.hpp"
#include "hype/ingest.hpp"
#include "hype/normality.hpp"
#include "hype/series.hpp"
#include "hype/signals.hpp"
#include "hype/stats.hpp"
#include "hype/synth.hpp"

namespace hype::pipeline {

using nlohmann::json;

enum class Stage { ingest, compute, classify, stats, signals, report };

inline Stage parse_stage(std::string_view s) {
    if (s == "ingest") return Stage::ingest;
    if (s == "compute") return Stage::compute;
    if (s == "classify") return Stage::classify;
    if (s == "stats") return Stage::stats;
    if (s == "signals") return Stage::signals;
    if (s == "report") return Stage::report;
    throw UsageError("unknown stage '" + std::string(s) + "'");
}

/// Value rounded to the 12 significant digits used by every text output; NaN and inf become null.
inline json num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(csv::format_number(v).c_str(), nullptr);
}

struct Inputs {
    std::vector<Ticker> universe;
    SectorMap sectors;  ///< restricted to the universe, universe order
    ValuePanel caps;    ///< universe columns, calendar dates within [start, end]
    AggregateResult aggregate;
    std::size_t dropped_before_calendar = 0;
    std::vector<ExternalSeries> externals;

    [[nodiscard]] const TradingCalendar& calendar() const { return caps.calendar; }
};

namespace detail {

inline std::ifstream open_input(const std::filesystem::path& p, std::string_view what) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + std::string(what) + " file " + p.string());
    return in;
}

template <class F>
auto with_file(const std::filesystem::path& p, std::string_view what, F&& parse) {
    auto in = open_input(p, what);
    try {
        return parse(in);
    } catch (const ValidationError& e) {
        throw ValidationError(p.filename().string() + ": " + e.what());
    }
}

inline HeadlineFormat infer_format(const RunConfig& cfg, const std::filesystem::path& p) {
    if (cfg.headlines_format) return *cfg.headlines_format;
    const auto ext = p.extension().string();
    return ext == ".jsonl" || ext == ".ndjson" ? HeadlineFormat::jsonl : HeadlineFormat::csv;
}

}  // namespace detail

inline Inputs load_inputs(const RunConfig& cfg) {
    validate(cfg);
    Inputs in;
    const auto full_map = detail::with_file(cfg.sectors, "sectors", [](std::istream& s) { return parse_sector_map(s); });
    in.universe = cfg.universe ? detail::with_file(*cfg.universe, "universe", [](std::istream& s) { return parse_universe(s); })
                               : full_map.tickers();
    if (in.universe.empty()) throw ValidationError("universe is empty");
    for (const auto& tk : in.universe) {
        const auto sector = full_map.sector_of(tk);
        if (!sector) throw ValidationError("universe ticker " + tk.str() + " has no sector mapping");
        in.sectors.add(tk, *sector);
    }

    const auto caps = detail::with_file(cfg.market_caps, "market_caps", [](std::istream& s) { return parse_value_panel(s); });
    in.caps = select(caps, in.universe, cfg.start, cfg.end);

    std::vector<HeadlineRecord> records;
    for (const auto& p : cfg.headlines) {
        const auto fmt = detail::infer_format(cfg, p);
        auto part = detail::with_file(p, "headlines", [&](std::istream& s) { return parse_headlines(s, fmt); });
        records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    // Stories older than the first session would otherwise all land on it.
    const Date first = in.calendar().front();
    const auto before = std::stable_partition(records.begin(), records.end(),
                                              [&](const HeadlineRecord& r) { return !(r.date < first); });
    in.dropped_before_calendar = static_cast<std::size_t>(records.end() - before);
    records.erase(before, records.end());
    in.aggregate = aggregate_counts(records, in.calendar(), in.universe);

    for (const auto& ext : cfg.externals) {
        in.externals.push_back(
            detail::with_file(ext.path, "external", [&](std::istream& s) { return parse_external_series(s, ext.name); }));
    }
    return in;
}

struct LevelResult {
    Level level = Level::ticker;
    SeriesSet raw;
    SeriesSet normalized;
    SeriesSet cap_adjusted;
    SeriesSet smoothed_raw;
    SeriesSet smoothed_cap_adjusted;
    WeightPanel weights;
};

inline LevelResult compute_level(const Inputs& in, Level level, const RunConfig& cfg) {
    LevelResult r;
    r.level = level;
    const auto ticker_raw = hype_index(in.aggregate.panel);
    r.raw = level == Level::ticker ? ticker_raw : sector_hype_index(ticker_raw, in.sectors);
    r.weights = market_cap_weight(in.caps, level, &in.sectors);
    r.cap_adjusted = cap_hype_index(r.raw, r.weights);
    r.normalized = normalize(r.raw, cfg.normalize);
    for (const auto& s : r.raw) r.smoothed_raw.push_back(smooth(s, cfg.window));
    for (const auto& s : r.cap_adjusted) r.smoothed_cap_adjusted.push_back(smooth(s, cfg.window));
    return r;
}

inline SeriesSet weight_series(const WeightPanel& w) {
    SeriesSet out;
    for (std::size_t i = 0; i < w.entities.size(); ++i) {
        HypeSeries s{w.entities[i], SeriesKind::weight, w.calendar.dates(), {}};
        for (std::size_t t = 0; t < w.calendar.size(); ++t) s.values.push_back(w.at(t, i));
        out.push_back(std::move(s));
    }
    return out;
}

/// Equal-weight daily mean of the sector cap-adjusted indices.
inline HypeSeries market_series(const LevelResult& sector) {
    const auto& first = sector.cap_adjusted.front();
    HypeSeries m{"market", SeriesKind::cap_adjusted, first.dates, std::vector<double>(first.size(), 0.0)};
    for (const auto& s : sector.cap_adjusted) {
        for (std::size_t t = 0; t < s.size(); ++t) m.values[t] += s.values[t];
    }
    for (double& v : m.values) v /= static_cast<double>(sector.cap_adjusted.size());
    return m;
}

/// Output sink: writes files under one directory and remembers their names.
class Bundle {
public:
    explicit Bundle(std::filesystem::path dir) : dir_(std::move(dir)) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw UsageError("cannot create output directory " + dir_.string() + ": " + ec.message());
    }

    void write(const std::string& name, const std::function<void(std::ostream&)>& body) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out) throw UsageError("cannot write " + path.string());
        body(out);
        if (!out) throw UsageError("write failed for " + path.string());
        files_.insert(name);
    }

    void write_json(const std::string& name, const json& j) {
        write(name, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
    }

    void skip(std::string what) { skipped_.push_back(std::move(what)); }

    [[nodiscard]] const std::set<std::string>& files() const noexcept { return files_; }
    [[nodiscard]] const std::vector<std::string>& skipped() const noexcept { return skipped_; }
    [[nodiscard]] std::vector<std::string> skipped_since(std::size_t mark) const {
        return {skipped_.begin() + static_cast<std::ptrdiff_t>(mark), skipped_.end()};
    }
    [[nodiscard]] const std::filesystem::path& dir() const noexcept { return dir_; }

private:
    std::filesystem::path dir_;
    std::set<std::string> files_;
    std::vector<std::string> skipped_;
};

namespace detail {

/// Runs an analysis that may be degenerate for this data; validation and
/// numerical failures are recorded instead of aborting the run.
template <class F>
bool attempt(Bundle& b, const std::string& what, F&& f) {
    try {
        f();
        return true;
    } catch (const UsageError&) {
        throw;
    } catch (const Error& e) {
        b.skip(what + ": " + e.what());
        return false;
    }
}

inline std::string level_name(Level l) { return std::string(to_string(l)); }

}  // namespace detail

// ---------------------------------------------------------------------------
// Stages

inline json run_ingest(const Inputs& in, Bundle& b) {
    b.write("counts.csv", [&](std::ostream& o) { write_count_panel(o, in.aggregate.panel); });
    b.write("market_caps.csv", [&](std::ostream& o) { write_value_panel(o, in.caps); });
    b.write("sectors.csv", [&](std::ostream& o) { write_sector_map(o, in.sectors); });
    b.write("calendar.csv", [&](std::ostream& o) {
        o << "date\n";
        for (const auto& d : in.calendar().dates()) o << d.str() << '\n';
    });
    const auto& d = in.aggregate.diagnostics;
    json j;
    j["records"] = d.records + in.dropped_before_calendar;
    j["counted"] = d.counted;
    j["rolled_forward"] = d.rolled_forward;
    j["skipped_outside_universe"] = d.skipped_outside_universe;
    j["dropped_after_calendar"] = d.dropped_after_calendar;
    j["dropped_before_calendar"] = in.dropped_before_calendar;
    j["unknown_tickers"] = std::vector<std::string>(d.unknown_tickers.begin(), d.unknown_tickers.end());
    j["n_dates"] = in.calendar().size();
    j["n_tickers"] = in.universe.size();
    j["first_date"] = in.calendar().front().str();
    j["last_date"] = in.calendar().back().str();
    json sc = json::object();
    for (const auto& [s, n] : in.sectors.sector_counts()) sc[s] = n;
    j["sector_counts"] = sc;
    json ext = json::object();
    for (const auto& e : in.externals) ext[e.name] = e.dates.size();
    j["externals"] = ext;
    b.write_json("ingest_summary.json", j);
    return j;
}

inline json run_compute(const LevelResult& r, Bundle& b) {
    const auto lv = detail::level_name(r.level);
    SeriesSet index = r.raw;
    index.insert(index.end(), r.normalized.begin(), r.normalized.end());
    index.insert(index.end(), r.cap_adjusted.begin(), r.cap_adjusted.end());
    b.write(lv + "_index.csv", [&](std::ostream& o) { write_series_csv(o, index); });
    b.write(lv + "_smoothed_raw.csv", [&](std::ostream& o) { write_series_csv(o, r.smoothed_raw); });
    b.write(lv + "_smoothed_cap_adjusted.csv", [&](std::ostream& o) { write_series_csv(o, r.smoothed_cap_adjusted); });
    b.write(lv + "_weights.csv", [&](std::ostream& o) { write_series_csv(o, weight_series(r.weights)); });
    return json{{"entities", r.raw.size()}, {"dates", r.raw.empty() ? 0 : r.raw.front().size()}};
}

inline json assignment_json(const ClusterAssignment& a, const EntityValues& averages, Level level, SeriesKind kind) {
    std::map<std::string, double> lookup(averages.begin(), averages.end());
    json groups = json::array();
    for (const auto& g : a.groups) {
        json members = json::array();
        for (const auto& m : g.members) members.push_back({{"entity", m}, {"period_average", num(lookup[m])}});
        groups.push_back({{"label", g.label}, {"group_mean", num(g.group_mean)}, {"members", members}});
    }
    return {{"level", to_string(level)}, {"kind", to_string(kind)}, {"method", to_string(a.method)}, {"groups", groups}};
}

inline json run_classify(const LevelResult& r, const RunConfig& cfg, Bundle& b) {
    const auto lv = detail::level_name(r.level);
    json summary = json::object();
    for (const auto kind : {SeriesKind::raw, SeriesKind::cap_adjusted}) {
        const auto& set = kind == SeriesKind::raw ? r.raw : r.cap_adjusted;
        const auto kn = std::string(to_string(kind));
        EntityValues averages;
        for (const auto& s : set) averages.emplace_back(s.entity, period_average(s));

        ClassifyOptions opt;
        opt.k = cfg.k;
        if (cfg.k == 3) opt.labels = default_labels(kind);
        const auto& cuts = kind == SeriesKind::raw ? cfg.raw_cutpoints : cfg.cutpoints;
        const bool thresholds = kind == SeriesKind::raw ? !cfg.raw_cutpoints.empty() : cfg.method == ClusterMethod::thresholds;
        opt.method = thresholds ? ClusterMethod::thresholds : ClusterMethod::kmeans1d;
        if (thresholds) opt.cutpoints = cuts;

        const std::string base = "classify_" + lv + "_" + kn;
        ClusterAssignment a;
        if (!detail::attempt(b, base, [&] { a = classify(averages, opt); })) continue;
        const auto j = assignment_json(a, averages, r.level, kind);
        summary[kn] = j;
        if (cfg.format == OutputFormat::json) {
            b.write_json(base + ".json", j);
        } else {
            std::map<std::string, double> lookup(averages.begin(), averages.end());
            b.write(base + ".csv", [&](std::ostream& o) {
                o << "entity,group_label,period_average\n";
                for (const auto& g : a.groups) {
                    for (const auto& m : g.members) csv::write_row(o, {m, g.label, csv::format_number(lookup[m])});
                }
            });
        }

        std::vector<BandSeries> bands;
        for (const auto& g : a.groups) {
            std::vector<HypeSeries> members;
            for (const auto& m : g.members) members.push_back(*find_series(set, m));
            detail::attempt(b, "band " + lv + " " + kn + " " + g.label,
                            [&] { bands.push_back(cluster_band(members, g.label)); });
        }
        if (!bands.empty()) {
            b.write("bands_" + lv + "_" + kn + ".csv", [&](std::ostream& o) {
                o << "group_label,date,mean,std,lower,upper\n";
                for (const auto& band : bands) {
                    for (std::size_t t = 0; t < band.dates.size(); ++t) {
                        csv::write_row(o, {band.label, band.dates[t].str(), csv::format_number(band.mean[t]),
                                           csv::format_number(band.std[t]), csv::format_number(band.lower[t]),
                                           csv::format_number(band.upper[t])});
                    }
                }
            });
        }
    }
    return summary;
}

inline json test_json(const stats::TestResult& t) {
    return {{"statistic", num(t.statistic)}, {"p_value", num(t.p_value)}};
}

inline json report_json(const stats::NormalityReport& r) {
    json cv = json::array();
    for (const auto& c : r.anderson_darling.critical_values) {
        cv.push_back({{"significance_pct", num(c.significance_pct)}, {"value", num(c.value)}});
    }
    return {{"n", r.n},
            {"shapiro_wilk", test_json(r.shapiro_wilk)},
            {"dagostino_k2", test_json(r.dagostino_k2)},
            {"jarque_bera", test_json(r.jarque_bera)},
            {"anderson_darling", {{"statistic", num(r.anderson_darling.statistic)}, {"critical_values", cv}}},
            {"kolmogorov_smirnov", test_json(r.kolmogorov_smirnov)}};
}

inline json fit_json(const stats::RegressionFit& f) {
    return {{"slope", num(f.slope)},
            {"intercept", num(f.intercept)},
            {"r_squared", num(f.r_squared)},
            {"p_slope", num(f.p_slope)},
            {"p_intercept", num(f.p_intercept)},
            {"stderr_slope", num(f.stderr_slope)},
            {"stderr_intercept", num(f.stderr_intercept)},
            {"n", f.n}};
}

inline json run_stats(const std::vector<LevelResult>& levels, const LevelResult* ticker, Bundle& b) {
    const auto mark = b.skipped().size();
    json j;
    json per_level = json::object();
    for (const auto& r : levels) {
        const auto lv = detail::level_name(r.level);
        json normality = json::object();
        json corr = json::object();
        for (std::size_t i = 0; i < r.raw.size(); ++i) {
            const auto& cap = r.cap_adjusted[i];
            detail::attempt(b, "normality " + lv + " " + cap.entity, [&] {
                const auto pct = stats::pct_change(cap);
                normality[cap.entity] = report_json(stats::normality_suite(pct.values));
            });
            detail::attempt(b, "correlation " + lv + " " + cap.entity,
                            [&] { corr[cap.entity] = num(stats::pearson_corr(r.raw[i], cap)); });
        }
        per_level[lv] = {{"normality_pct_change_cap_adjusted", normality}, {"correlation_raw_vs_cap_adjusted", corr}};
    }
    j["levels"] = per_level;

    // Firm-day panel: news weight against market weight.
    if (ticker) {
        std::vector<double> x, y, px, py;
        for (std::size_t i = 0; i < ticker->raw.size(); ++i) {
            const auto col = *ticker->weights.entity_index(ticker->raw[i].entity);
            for (std::size_t t = 0; t < ticker->raw[i].size(); ++t) {
                const double w = ticker->weights.at(t, col);
                const double h = ticker->raw[i].values[t];
                x.push_back(w);
                y.push_back(h);
                if (h > 0.0) {
                    px.push_back(w);
                    py.push_back(h);
                }
            }
        }
        json reg = json::object();
        detail::attempt(b, "linear fit news weight vs market weight",
                        [&] { reg["linear"] = fit_json(stats::linear_fit(x, y)); });
        detail::attempt(b, "power fit news weight vs market weight", [&] {
            const auto p = stats::power_fit(px, py);
            reg["power"] = {{"coefficient", num(p.coefficient)},
                            {"exponent", num(p.exponent)},
                            {"r_squared_log", num(p.r_squared_log)},
                            {"n", p.n},
                            {"excluded_zero_news", x.size() - px.size()},
                            {"log_fit", fit_json(p.log_fit)}};
        });
        j["news_weight_vs_market_weight"] = reg;
    }
    j["skipped"] = b.skipped_since(mark);
    b.write_json("stats.json", j);
    return j;
}

inline void write_events(Bundle& b, const std::string& base, const std::vector<EventFlag>& flags, OutputFormat fmt) {
    if (fmt == OutputFormat::json) {
        json arr = json::array();
        for (const auto& f : flags) {
            arr.push_back({{"date", f.date.str()}, {"entity", f.entity}, {"z_score", num(f.z_score)},
                           {"direction", to_string(f.direction)}});
        }
        b.write_json(base + ".json", arr);
        return;
    }
    b.write(base + ".csv", [&](std::ostream& o) {
        o << "date,entity,z_score,direction\n";
        for (const auto& f : flags) {
            csv::write_row(o, {f.date.str(), f.entity, csv::format_number(f.z_score), std::string(to_string(f.direction))});
        }
    });
}

inline void write_comparison(Bundle& b, const std::string& name, const Comparison& c) {
    b.write(name, [&](std::ostream& o) {
        o << "date,hype_level,hype_change,hype_pct_change,external_level,external_change\n";
        for (const auto& r : c.rows) {
            csv::write_row(o, {r.date.str(), csv::format_number(r.hype_level), csv::format_number(r.hype_change),
                               csv::format_number(r.hype_pct_change), csv::format_number(r.external_level),
                               csv::format_number(r.external_change)});
        }
    });
}

/// Sector total market cap as a dated series.
inline std::vector<HypeSeries> sector_caps(const Inputs& in) {
    std::vector<HypeSeries> out;
    for (const auto& sector : in.sectors.sectors()) {
        HypeSeries s{sector, SeriesKind::raw, in.calendar().dates(), std::vector<double>(in.calendar().size(), 0.0)};
        for (std::size_t i = 0; i < in.caps.tickers.size(); ++i) {
            if (*in.sectors.sector_of(in.caps.tickers[i]) != sector) continue;
            for (std::size_t t = 0; t < in.calendar().size(); ++t) s.values[t] += in.caps.at(t, i);
        }
        out.push_back(std::move(s));
    }
    return out;
}

inline json run_signals(const Inputs& in, const std::vector<LevelResult>& levels, const LevelResult& sector,
                        const RunConfig& cfg, Bundle& b) {
    const auto mark = b.skipped().size();
    json j;
    json per_level = json::object();
    for (const auto& r : levels) {
        const auto lv = detail::level_name(r.level);
        std::vector<EventFlag> flags;
        std::size_t zero_std = 0;
        SeriesSet deviations, momentum;
        json baselines = json::object();
        std::vector<double> baseline_values;
        for (const auto& s : r.cap_adjusted) {
            detail::attempt(b, "events " + lv + " " + s.entity, [&] {
                auto scan = detect_events(s, cfg.z_threshold, cfg.baseline_window);
                flags.insert(flags.end(), scan.flags.begin(), scan.flags.end());
                zero_std += scan.skipped_zero_std;
            });
            const auto st = hype_neutrality(s);
            baselines[s.entity] = num(st.baseline);
            baseline_values.push_back(st.baseline);
            deviations.push_back(st.deviation);
            deviations.back().kind = SeriesKind::deviation;
            detail::attempt(b, "momentum " + lv + " " + s.entity, [&] {
                const auto m = hype_momentum(st, cfg.momentum_window);
                momentum.push_back(HypeSeries{s.entity, SeriesKind::momentum, m.dates, m.values});
            });
        }
        std::stable_sort(flags.begin(), flags.end(), [](const EventFlag& a, const EventFlag& c) { return a.date < c.date; });
        write_events(b, "events_" + lv, flags, cfg.format);
        b.write("neutrality_" + lv + ".csv", [&](std::ostream& o) {
            o << "entity,baseline\n";
            for (std::size_t i = 0; i < r.cap_adjusted.size(); ++i) {
                csv::write_row(o, {r.cap_adjusted[i].entity, csv::format_number(baseline_values[i])});
            }
        });
        b.write("deviation_" + lv + ".csv", [&](std::ostream& o) { write_series_csv(o, deviations); });
        b.write("momentum_" + lv + ".csv", [&](std::ostream& o) { write_series_csv(o, momentum); });
        per_level[lv] = {{"events", flags.size()}, {"zero_std_dates_skipped", zero_std}, {"baselines", baselines}};
    }
    j["levels"] = per_level;

    json comparisons = json::object();
    if (!in.externals.empty()) {
        const HypeSeries* target = nullptr;
        HypeSeries market;
        if (cfg.external_entity == "market") {
            market = market_series(sector);
            target = &market;
        } else {
            for (const auto& r : levels) {
                if (auto* s = find_series(r.cap_adjusted, cfg.external_entity)) target = s;
            }
            if (!target) target = find_series(sector.cap_adjusted, cfg.external_entity);
            if (!target) throw UsageError("external_entity '" + cfg.external_entity + "' is not a computed entity");
        }
        for (const auto& ext : in.externals) {
            detail::attempt(b, "compare " + ext.name, [&] {
                const auto c = compare_external(*target, ext, cfg.window);
                write_comparison(b, "compare_" + ext.name + ".csv", c);
                comparisons[ext.name] = {{"entity", target->entity}, {"rows", c.rows.size()},
                                         {"change_correlation", num(c.change_correlation)}};
            });
        }
    }
    j["external_comparisons"] = comparisons;

    // Sector volatility from 5-day rolling log-return std of sector total caps.
    SeriesSet vol;
    json vol_corr = json::object();
    for (const auto& caps : sector_caps(in)) {
        detail::attempt(b, "volatility " + caps.entity, [&] {
            vol.push_back(stats::log_return_rolling_std(caps, 5));
            const auto* hype = find_series(sector.cap_adjusted, caps.entity);
            detail::attempt(b, "volatility correlation " + caps.entity,
                            [&] { vol_corr[caps.entity] = num(stats::pearson_corr(*hype, vol.back())); });
        });
    }
    if (!vol.empty()) b.write("volatility_sector.csv", [&](std::ostream& o) { write_series_csv(o, vol); });
    j["volatility_correlation_cap_adjusted"] = vol_corr;
    j["skipped"] = b.skipped_since(mark);
    b.write_json("signals.json", j);
    return j;
}

struct RunResult {
    json summary;
    std::vector<std::string> files;
    std::vector<std::string> skipped;
};

inline RunResult run(const RunConfig& cfg, Stage stage) {
    const auto in = load_inputs(cfg);
    Bundle b(cfg.out);
    json summary;
    auto wants = [&](Stage s) { return stage == s || stage == Stage::report; };

    if (wants(Stage::ingest)) summary["ingest"] = run_ingest(in, b);

    std::vector<LevelResult> levels;
    std::optional<LevelResult> sector_extra;
    const LevelResult* ticker = nullptr;
    const LevelResult* sector = nullptr;
    if (stage != Stage::ingest) {
        for (auto lv : cfg.levels) levels.push_back(compute_level(in, lv, cfg));
        for (const auto& r : levels) {
            if (r.level == Level::ticker) ticker = &r;
            if (r.level == Level::sector) sector = &r;
        }
        if (!sector && stage != Stage::compute && stage != Stage::classify) {
            sector_extra = compute_level(in, Level::sector, cfg);
            sector = &*sector_extra;
        }
    }
    if (wants(Stage::compute)) {
        json c = json::object();
        for (const auto& r : levels) c[detail::level_name(r.level)] = run_compute(r, b);
        summary["compute"] = c;
    }
    if (wants(Stage::classify)) {
        json c = json::object();
        for (const auto& r : levels) c[detail::level_name(r.level)] = run_classify(r, cfg, b);
        summary["classify"] = c;
        if (stage == Stage::classify) b.write_json("classify_summary.json", c);
    }
    if (wants(Stage::stats)) summary["stats"] = run_stats(levels, ticker, b);
    if (wants(Stage::signals)) summary["signals"] = run_signals(in, levels, *sector, cfg, b);

    if (stage == Stage::report) {
        json manifest;
        manifest["summary"] = summary;
        auto files = std::vector<std::string>(b.files().begin(), b.files().end());
        files.push_back("report.json");
        std::sort(files.begin(), files.end());
        manifest["files"] = files;
        manifest["skipped"] = b.skipped();
        b.write_json("report.json", manifest);
    }
    return {summary, std::vector<std::string>(b.files().begin(), b.files().end()), b.skipped()};
}

// ---------------------------------------------------------------------------
// Synthetic fixture on disk

inline std::vector<std::string> write_synthetic(const synth::SynthSpec& spec, const std::filesystem::path& dir) {
    const auto data = synth::generate(spec);
    Bundle b(dir);
    b.write("headlines.csv", [&](std::ostream& o) { write_headlines(o, data.headlines); });
    b.write("market_caps.csv", [&](std::ostream& o) { write_value_panel(o, data.market_caps); });
    b.write("sectors.csv", [&](std::ostream& o) { write_sector_map(o, data.sectors); });
    b.write("universe.csv", [&](std::ostream& o) {
        o << "ticker\n";
        for (const auto& t : data.tickers) o << t.str() << '\n';
    });
    b.write("config.toml", [&](std::ostream& o) {
        o << "# synthetic fixture, seed " << spec.seed << "\n"
          << "[run]\n"
          << "universe = \"universe.csv\"\n"
          << "headlines = \"headlines.csv\"\n"
          << "market_caps = \"market_caps.csv\"\n"
          << "sectors = \"sectors.csv\"\n"
          << "out = \"out\"\n";
    });
    return {b.files().begin(), b.files().end()};
}

}  // namespace hype::pipeline
