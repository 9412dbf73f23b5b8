#pragma once

// Row-oriented result tables and their CSV / JSON encodings.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "fgi/cli/set_parser.hpp"

namespace fgi::cli {

using Cell = std::variant<std::monostate, std::string, double, std::int64_t, bool>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;

    void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

enum class Format { csv, json };

namespace detail {

inline std::string cell_text(const Cell& c) {
    if (const auto* s = std::get_if<std::string>(&c)) return *s;
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
    if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
    return "";
}

inline std::string csv_field(const Cell& c) {
    std::string text = cell_text(c);
    if (!std::holds_alternative<std::string>(c) || text.find_first_of(",\"\n") == std::string::npos) return text;
    std::string quoted = "\"";
    for (char ch : text) {
        if (ch == '"') quoted += '"';
        quoted += ch;
    }
    return quoted + '"';
}

inline std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (unsigned char ch : s) {
        switch (ch) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (ch < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    out += buf;
                } else {
                    out += static_cast<char>(ch);
                }
        }
    }
    return out + '"';
}

inline std::string json_value(const Cell& c) {
    if (std::holds_alternative<std::monostate>(c)) return "null";
    if (const auto* s = std::get_if<std::string>(&c)) return json_string(*s);
    if (const auto* d = std::get_if<double>(&c)) {
        // JSON has no infinities; they travel as the CSV spelling
        return std::isfinite(*d) ? format_number(*d) : json_string(format_number(*d));
    }
    return cell_text(c);
}

}  // namespace detail

/// CSV starts with a versioned comment line naming the convention.
inline void write_table(std::ostream& os, const Table& t, Format f, const std::string& convention) {
    if (f == Format::csv) {
        os << "# frac-gauss-iso v1, convention=" << convention << '\n';
        for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
        os << '\n';
        for (const auto& row : t.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << detail::csv_field(row[i]);
            os << '\n';
        }
        return;
    }
    os << '[';
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        os << (r ? ",\n " : "\n ") << '{';
        for (std::size_t i = 0; i < t.columns.size(); ++i) {
            os << (i ? ", " : "") << detail::json_string(t.columns[i]) << ": " << detail::json_value(t.rows[r][i]);
        }
        os << '}';
    }
    os << (t.rows.empty() ? "]\n" : "\n]\n");
}

}  // namespace fgi::cli
