#pragma once

// CSV reading, writing and schema validation for every table the CLI emits.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iterator>
#include <string>
#include <string_view>
#include <vector>

#include "renew/error.hpp"

namespace renew::csv {

using Row = std::vector<std::string>;

struct Table {
    Row header;
    std::vector<Row> rows;
};

/// Fixed six-decimal rendering; "inf" / "-inf" / "nan" for non-finite values.
[[nodiscard]] inline std::string real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

[[nodiscard]] inline std::string quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

[[nodiscard]] inline std::string format(const Table& t) {
    std::string out;
    auto line = [&](const Row& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out += ',';
            out += quote(r[i]);
        }
        out += '\n';
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

/// RFC 4180 subset: quoted fields, doubled quotes, LF or CRLF line ends.
[[nodiscard]] inline Table parse(std::string_view text) {
    std::vector<Row> lines;
    Row row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            row.push_back(std::move(field));
            field.clear();
            lines.push_back(std::move(row));
            row.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) fail("csv: unterminated quoted field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        lines.push_back(std::move(row));
    }
    if (lines.empty()) fail("csv: missing header");
    Table t;
    t.header = std::move(lines.front());
    t.rows.assign(std::make_move_iterator(lines.begin() + 1), std::make_move_iterator(lines.end()));
    return t;
}

enum class Type { Int, Real, Bool, Text };

struct Column {
    std::string name;
    Type type{Type::Text};
    std::vector<std::string> allowed{};  ///< Text only; empty means any
    bool nonempty{true};
};

struct Schema {
    std::string name;
    std::vector<Column> columns;
};

namespace detail {

inline bool is_int(const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    (void)std::strtoll(s.c_str(), &end, 10);
    return *end == '\0';
}

inline bool is_real(const std::string& s) {
    if (s == "inf" || s == "-inf" || s == "nan") return true;
    if (s.empty()) return false;
    char* end = nullptr;
    (void)std::strtod(s.c_str(), &end);
    return *end == '\0';
}

}  // namespace detail

/// Every violation found, as "row r, column c: ..." messages; empty when valid.
[[nodiscard]] inline std::vector<std::string> validate(const Table& t, const Schema& schema) {
    std::vector<std::string> errs;
    if (t.header.size() != schema.columns.size()) {
        errs.push_back(schema.name + ": expected " + std::to_string(schema.columns.size()) + " columns, header has " +
                       std::to_string(t.header.size()));
        return errs;
    }
    for (std::size_t c = 0; c < t.header.size(); ++c)
        if (t.header[c] != schema.columns[c].name)
            errs.push_back(schema.name + ": header column " + std::to_string(c) + " is '" + t.header[c] + "', expected '" +
                           schema.columns[c].name + "'");
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const Row& row = t.rows[r];
        const std::string where = schema.name + ": row " + std::to_string(r + 1);
        if (row.size() != schema.columns.size()) {
            errs.push_back(where + " has " + std::to_string(row.size()) + " fields");
            continue;
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            const Column& col = schema.columns[c];
            const std::string& v = row[c];
            bool ok = true;
            switch (col.type) {
                case Type::Int: ok = detail::is_int(v); break;
                case Type::Real: ok = detail::is_real(v); break;
                case Type::Bool: ok = v == "0" || v == "1"; break;
                case Type::Text:
                    ok = (!col.nonempty || !v.empty()) &&
                         (col.allowed.empty() || std::find(col.allowed.begin(), col.allowed.end(), v) != col.allowed.end());
                    break;
            }
            if (!ok) errs.push_back(where + ", column '" + col.name + "': bad value '" + v + "'");
        }
    }
    return errs;
}

[[nodiscard]] inline std::vector<std::string> validate(std::string_view text, const Schema& schema) {
    try {
        return validate(parse(text), schema);
    } catch (const Error& e) {
        return {schema.name + ": " + e.what()};
    }
}

namespace schemas {

inline const Schema& metrics() {
    static const Schema s{"metrics",
                          {{"planner", Type::Text},
                           {"k", Type::Int},
                           {"fuel", Type::Real},
                           {"safety", Type::Real},
                           {"length", Type::Real},
                           {"fuel_per_distance", Type::Real},
                           {"states", Type::Int}}};
    return s;
}

inline const Schema& comparison() {
    static const Schema s{"comparison",
                          {{"planner", Type::Text, {"RENEW", "grid A*-O", "grid A*-S"}},
                           {"status", Type::Text, {"ok", "failed"}},
                           {"fuel", Type::Real},
                           {"safety", Type::Real},
                           {"length", Type::Real},
                           {"fuel_per_distance", Type::Real},
                           {"states", Type::Int},
                           {"message", Type::Text, {}, false}}};
    return s;
}

inline const Schema& padding() {
    static const Schema s{"padding",
                          {{"channel", Type::Int},
                           {"edge_id", Type::Int},
                           {"v0", Type::Int},
                           {"v1", Type::Int},
                           {"triangle", Type::Int},
                           {"heading", Type::Real},
                           {"offset", Type::Real},
                           {"inradius", Type::Real},
                           {"clamped", Type::Bool},
                           {"sigma", Type::Real},
                           {"n_samples", Type::Int},
                           {"scheme", Type::Text}}};
    return s;
}

inline const Schema& padding_channels() {
    static const Schema s{"padding_channels",
                          {{"channel", Type::Int},
                           {"signature", Type::Text},
                           {"feasible", Type::Bool},
                           {"blocked_passing_edge", Type::Int},
                           {"min_usable_length", Type::Real}}};
    return s;
}

inline const Schema& contingency() {
    static const Schema s{"contingency",
                          {{"station", Type::Int},
                           {"s", Type::Real},
                           {"x", Type::Real},
                           {"y", Type::Real},
                           {"heading", Type::Real},
                           {"turn", Type::Text, {"left", "right"}},
                           {"clearance", Type::Real},
                           {"collided", Type::Bool}}};
    return s;
}

inline const Schema& contingency_summary() {
    static const Schema s{"contingency_summary",
                          {{"planner", Type::Text},
                           {"trials", Type::Int},
                           {"collisions", Type::Int},
                           {"path_length", Type::Real},
                           {"spacing", Type::Real},
                           {"seed", Type::Int},
                           {"noise", Type::Bool}}};
    return s;
}

inline const Schema& mesh_triangles() {
    static const Schema s{"mesh_triangles",
                          {{"triangle", Type::Int},
                           {"v0", Type::Int},
                           {"v1", Type::Int},
                           {"v2", Type::Int},
                           {"label", Type::Text, {"free", "obstacle"}},
                           {"n0", Type::Int},
                           {"n1", Type::Int},
                           {"n2", Type::Int}}};
    return s;
}

inline std::vector<const Schema*> all() {
    return {&metrics(), &comparison(), &padding(), &padding_channels(), &contingency(), &contingency_summary(),
            &mesh_triangles()};
}

/// Schema whose name matches, or nullptr.
inline const Schema* find(std::string_view name) {
    for (const Schema* s : all())
        if (s->name == name) return s;
    return nullptr;
}

}  // namespace schemas

}  // namespace renew::csv
