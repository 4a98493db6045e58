#pragma once

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "hype/error.hpp"

namespace hype::csv {

/// Shortest-stable rendering used for every numeric output: 12 significant digits.
inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

/// Splits one CSV record. Double-quoted fields may contain commas and "" escapes.
inline std::vector<std::string> split_line(std::string_view line, std::size_t line_no = 0) {
    std::vector<std::string> out;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field.push_back(c);
            }
        } else if (c == '"' && trim(field).empty()) {
            field.clear();
            quoted = true;
            was_quoted = true;
        } else if (c == ',') {
            out.push_back(was_quoted ? field : std::string(trim(field)));
            field.clear();
            was_quoted = false;
        } else {
            field.push_back(c);
        }
    }
    if (quoted) throw ValidationError("unterminated quoted field", line_no);
    out.push_back(was_quoted ? field : std::string(trim(field)));
    return out;
}

inline std::string escape(std::string_view field) {
    if (field.find_first_of(",\"\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

struct Row {
    std::size_t line = 0;  // 1-based source line
    std::vector<std::string> fields;
};

/// A parsed CSV document: header plus data rows, blank lines skipped.
struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;

    [[nodiscard]] std::optional<std::size_t> find(std::string_view column) const {
        const auto it = std::find(header.begin(), header.end(), column);
        if (it == header.end()) return std::nullopt;
        return static_cast<std::size_t>(it - header.begin());
    }

    [[nodiscard]] std::size_t require(std::string_view column) const {
        if (auto idx = find(column)) return *idx;
        throw SchemaError("missing required column '" + std::string(column) + "'");
    }
};

inline Table read(std::istream& in) {
    Table table;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1 && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
        if (trim(line).empty()) continue;
        auto fields = split_line(line, line_no);
        if (!have_header) {
            table.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != table.header.size()) {
            throw ValidationError("expected " + std::to_string(table.header.size()) + " fields, found " +
                                      std::to_string(fields.size()),
                                  line_no);
        }
        table.rows.push_back(Row{line_no, std::move(fields)});
    }
    if (!have_header) throw SchemaError("empty input: no header row");
    return table;
}

inline double parse_double(std::string_view text, std::size_t line_no, std::string_view what) {
    const std::string s(trim(text));
    if (s.empty()) throw ValidationError("empty " + std::string(what), line_no);
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
        throw ValidationError("invalid " + std::string(what) + " '" + s + "'", line_no);
    }
    return v;
}

inline long long parse_int(std::string_view text, std::size_t line_no, std::string_view what) {
    const std::string s(trim(text));
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(s.c_str(), &end, 10);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE) {
        throw ValidationError("invalid " + std::string(what) + " '" + s + "'", line_no);
    }
    return v;
}

inline void write_row(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out << ',';
        out << escape(fields[i]);
    }
    out << '\n';
}

}  // namespace hype::csv
