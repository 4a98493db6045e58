#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hype/clusters.hpp"
#include "hype/csv.hpp"
#include "hype/date.hpp"
#include "hype/error.hpp"
#include "hype/index.hpp"
#include "hype/ingest.hpp"
#include "hype/signals.hpp"

namespace hype {

namespace toml {

/// Subset of TOML: [table], [[array-of-tables]], bare keys, basic strings,
/// integers, floats, booleans, single-line arrays of those, # comments.
/// Every value is kept as its text; arrays are joined with commas.
struct Entry {
    std::string value;
    std::size_t line = 0;
};

using Table = std::map<std::string, Entry>;

struct Document {
    std::map<std::string, Table> tables;
    std::map<std::string, std::vector<Table>> arrays;
};

namespace detail {

inline std::string parse_string(std::string_view s, std::size_t& pos, std::size_t line) {
    std::string out;
    ++pos;  // opening quote
    while (pos < s.size() && s[pos] != '"') {
        if (s[pos] == '\\') {
            if (++pos >= s.size()) break;
            switch (s[pos]) {
            case 'n': out.push_back('\n'); break;
            case 't': out.push_back('\t'); break;
            case '"': out.push_back('"'); break;
            case '\\': out.push_back('\\'); break;
            default: throw ValidationError("config: unsupported escape \\" + std::string(1, s[pos]), line);
            }
        } else {
            out.push_back(s[pos]);
        }
        ++pos;
    }
    if (pos >= s.size()) throw ValidationError("config: unterminated string", line);
    ++pos;
    return out;
}

inline std::string parse_scalar(std::string_view s, std::size_t& pos, std::size_t line) {
    if (s[pos] == '"') return parse_string(s, pos, line);
    if (s[pos] == '\'') {
        const auto end = s.find('\'', pos + 1);
        if (end == std::string_view::npos) throw ValidationError("config: unterminated string", line);
        std::string out(s.substr(pos + 1, end - pos - 1));
        pos = end + 1;
        return out;
    }
    const auto start = pos;
    while (pos < s.size() && s[pos] != ',' && s[pos] != ']' && s[pos] != '#') ++pos;
    const auto text = csv::trim(s.substr(start, pos - start));
    if (text.empty()) throw ValidationError("config: missing value", line);
    return std::string(text);
}

inline void skip_ws(std::string_view s, std::size_t& pos) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
}

inline void expect_end(std::string_view s, std::size_t pos, std::size_t line) {
    skip_ws(s, pos);
    if (pos < s.size() && s[pos] != '#' && s[pos] != '\r') {
        throw ValidationError("config: trailing characters after value", line);
    }
}

}  // namespace detail

inline Document parse(std::istream& in) {
    Document doc;
    Table* current = &doc.tables[""];
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string_view line = csv::trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (line.starts_with("[[")) {
            const auto end = line.find("]]");
            if (end == std::string_view::npos) throw ValidationError("config: malformed array header", line_no);
            auto& vec = doc.arrays[std::string(csv::trim(line.substr(2, end - 2)))];
            vec.emplace_back();
            current = &vec.back();
            continue;
        }
        if (line.front() == '[') {
            const auto end = line.find(']');
            if (end == std::string_view::npos) throw ValidationError("config: malformed table header", line_no);
            current = &doc.tables[std::string(csv::trim(line.substr(1, end - 1)))];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ValidationError("config: expected key = value", line_no);
        std::string key(csv::trim(line.substr(0, eq)));
        if (key.size() >= 2 && key.front() == '"' && key.back() == '"') key = key.substr(1, key.size() - 2);
        if (key.empty()) throw ValidationError("config: empty key", line_no);
        const std::string_view rest = line.substr(eq + 1);
        std::size_t pos = 0;
        detail::skip_ws(rest, pos);
        if (pos >= rest.size()) throw ValidationError("config: missing value for " + key, line_no);
        std::string value;
        if (rest[pos] == '[') {
            ++pos;
            bool first = true;
            for (;;) {
                detail::skip_ws(rest, pos);
                if (pos >= rest.size()) throw ValidationError("config: unterminated array", line_no);
                if (rest[pos] == ']') {
                    ++pos;
                    break;
                }
                if (!first) value += ',';
                value += detail::parse_scalar(rest, pos, line_no);
                first = false;
                detail::skip_ws(rest, pos);
                if (pos < rest.size() && rest[pos] == ',') ++pos;
            }
        } else {
            value = detail::parse_scalar(rest, pos, line_no);
        }
        detail::expect_end(rest, pos, line_no);
        if (!current->emplace(key, Entry{value, line_no}).second) {
            throw ValidationError("config: duplicate key " + key, line_no);
        }
    }
    return doc;
}

}  // namespace toml

enum class OutputFormat { csv, json };

struct ExternalSource {
    std::string name;
    std::filesystem::path path;
};

struct RunConfig {
    std::optional<std::filesystem::path> universe;
    std::vector<std::filesystem::path> headlines;
    std::optional<HeadlineFormat> headlines_format;  ///< inferred from extension when unset
    std::filesystem::path market_caps;
    std::filesystem::path sectors;
    std::vector<ExternalSource> externals;
    std::optional<Date> start;
    std::optional<Date> end;
    NormalizeMode normalize = NormalizeMode::overall;
    std::size_t window = 7;
    ClusterMethod method = ClusterMethod::kmeans1d;
    std::size_t k = 3;
    std::vector<double> cutpoints;      ///< cap-adjusted classification
    std::vector<double> raw_cutpoints;  ///< raw classification; kmeans1d when empty
    double z_threshold = kDefaultZThreshold;
    std::size_t baseline_window = kDefaultBaselineWindow;
    std::size_t momentum_window = 7;
    std::string external_entity = "market";
    std::vector<Level> levels = {Level::ticker, Level::sector};
    std::filesystem::path out = "out";
    OutputFormat format = OutputFormat::csv;
};

namespace detail {

inline std::vector<std::string> split_list(std::string_view text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        const auto comma = text.find(',', start);
        const auto end = comma == std::string_view::npos ? text.size() : comma;
        const auto item = csv::trim(text.substr(start, end - start));
        if (!item.empty()) out.emplace_back(item);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
    long long n;
    try {
        n = csv::parse_int(v, 0, key);
    } catch (const ValidationError&) {
        throw UsageError(key + ": expected a positive integer, got '" + v + "'");
    }
    if (n <= 0) throw UsageError(key + " must be positive, got " + v);
    return static_cast<std::size_t>(n);
}

inline double parse_real(const std::string& key, const std::string& v) {
    try {
        return csv::parse_double(v, 0, key);
    } catch (const ValidationError&) {
        throw UsageError(key + ": expected a number, got '" + v + "'");
    }
}

inline Date parse_date_arg(const std::string& key, const std::string& v) {
    try {
        return Date::parse(v);
    } catch (const ValidationError& e) {
        throw UsageError(key + ": " + e.what());
    }
}

}  // namespace detail

/// Assigns one configuration key from its text form. Relative paths resolve against `base`.
inline void set_key(RunConfig& cfg, std::string key, const std::string& v, const std::filesystem::path& base = {}) {
    for (char& c : key) {
        if (c == '-') c = '_';
    }
    auto path = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_relative() && !base.empty() ? base / fp : fp;
    };
    auto reals = [&](const std::string& text) {
        std::vector<double> out;
        for (const auto& item : detail::split_list(text)) out.push_back(detail::parse_real(key, item));
        return out;
    };
    if (key == "universe") {
        cfg.universe = path(v);
    } else if (key == "headlines") {
        cfg.headlines.clear();
        for (const auto& item : detail::split_list(v)) cfg.headlines.push_back(path(item));
    } else if (key == "headlines_format") {
        if (v == "csv") cfg.headlines_format = HeadlineFormat::csv;
        else if (v == "jsonl") cfg.headlines_format = HeadlineFormat::jsonl;
        else throw UsageError("headlines_format must be csv or jsonl, got '" + v + "'");
    } else if (key == "market_caps") {
        cfg.market_caps = path(v);
    } else if (key == "sectors") {
        cfg.sectors = path(v);
    } else if (key == "start") {
        cfg.start = detail::parse_date_arg(key, v);
    } else if (key == "end") {
        cfg.end = detail::parse_date_arg(key, v);
    } else if (key == "normalize") {
        if (v == "daily") cfg.normalize = NormalizeMode::daily;
        else if (v == "overall") cfg.normalize = NormalizeMode::overall;
        else throw UsageError("normalize must be daily or overall, got '" + v + "'");
    } else if (key == "window") {
        cfg.window = detail::parse_count(key, v);
    } else if (key == "method") {
        cfg.method = parse_cluster_method(v);
    } else if (key == "k") {
        cfg.k = detail::parse_count(key, v);
    } else if (key == "cutpoints") {
        cfg.cutpoints = reals(v);
    } else if (key == "raw_cutpoints") {
        cfg.raw_cutpoints = reals(v);
    } else if (key == "z_threshold") {
        cfg.z_threshold = detail::parse_real(key, v);
        if (!(cfg.z_threshold > 0.0)) throw UsageError("z_threshold must be positive");
    } else if (key == "baseline_window") {
        cfg.baseline_window = detail::parse_count(key, v);
    } else if (key == "momentum_window") {
        cfg.momentum_window = detail::parse_count(key, v);
    } else if (key == "external_entity") {
        cfg.external_entity = v;
    } else if (key == "levels") {
        cfg.levels.clear();
        for (const auto& item : detail::split_list(v)) {
            if (item == "ticker") cfg.levels.push_back(Level::ticker);
            else if (item == "sector") cfg.levels.push_back(Level::sector);
            else throw UsageError("levels: unknown level '" + item + "'");
        }
        if (cfg.levels.empty()) throw UsageError("levels: at least one level required");
    } else if (key == "out") {
        cfg.out = path(v);
    } else if (key == "format") {
        if (v == "csv") cfg.format = OutputFormat::csv;
        else if (v == "json") cfg.format = OutputFormat::json;
        else throw UsageError("format must be csv or json, got '" + v + "'");
    } else {
        throw UsageError("unknown configuration key '" + key + "'");
    }
}

/// "name=path" as used on the command line.
inline ExternalSource parse_external_arg(const std::string& text, const std::filesystem::path& base = {}) {
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
        throw UsageError("external: expected NAME=PATH, got '" + text + "'");
    }
    std::filesystem::path p(text.substr(eq + 1));
    if (p.is_relative() && !base.empty()) p = base / p;
    return {text.substr(0, eq), p};
}

inline RunConfig config_from(const toml::Document& doc, const std::filesystem::path& base) {
    RunConfig cfg;
    for (const auto& [name, table] : doc.tables) {
        if (name != "" && name != "run") throw UsageError("config: unknown table [" + name + "]");
        for (const auto& [key, entry] : table) {
            try {
                set_key(cfg, key, entry.value, base);
            } catch (const UsageError& e) {
                throw UsageError("config line " + std::to_string(entry.line) + ": " + e.what());
            }
        }
    }
    for (const auto& [name, tables] : doc.arrays) {
        if (name != "external") throw UsageError("config: unknown array [[" + name + "]]");
        for (const auto& t : tables) {
            const auto n = t.find("name");
            const auto p = t.find("path");
            if (n == t.end() || p == t.end()) throw UsageError("config: [[external]] needs name and path");
            for (const auto& [key, entry] : t) {
                if (key != "name" && key != "path") {
                    throw UsageError("config line " + std::to_string(entry.line) + ": unknown key " + key);
                }
            }
            std::filesystem::path fp(p->second.value);
            if (fp.is_relative()) fp = base / fp;
            cfg.externals.push_back({n->second.value, fp});
        }
    }
    return cfg;
}

inline RunConfig load_config(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw ValidationError("cannot open config file " + file.string());
    const auto doc = toml::parse(in);
    auto base = file.parent_path();
    if (base.empty()) base = ".";
    return config_from(doc, base);
}

/// Cross-field checks run after all overrides are applied.
inline void validate(const RunConfig& cfg) {
    if (cfg.start && cfg.end && *cfg.end < *cfg.start) {
        throw UsageError("end date " + cfg.end->str() + " precedes start date " + cfg.start->str());
    }
    if (cfg.headlines.empty()) throw UsageError("no headlines file configured");
    if (cfg.market_caps.empty()) throw UsageError("no market_caps file configured");
    if (cfg.sectors.empty()) throw UsageError("no sectors file configured");
    if (cfg.method == ClusterMethod::thresholds && cfg.cutpoints.size() != cfg.k - 1) {
        throw UsageError("thresholds method needs " + std::to_string(cfg.k - 1) + " cutpoints");
    }
    if (!cfg.raw_cutpoints.empty() && cfg.raw_cutpoints.size() != cfg.k - 1) {
        throw UsageError("raw_cutpoints needs " + std::to_string(cfg.k - 1) + " values");
    }
    if (cfg.baseline_window < 2) throw UsageError("baseline_window must be >= 2");
    if (cfg.momentum_window < 2) throw UsageError("momentum_window must be >= 2");
    for (std::size_t i = 0; i < cfg.externals.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (cfg.externals[i].name == cfg.externals[j].name) {
                throw UsageError("duplicate external series name " + cfg.externals[i].name);
            }
        }
    }
}

}  // namespace hype
