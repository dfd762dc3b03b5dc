/**
 * @file report.hpp
 * @brief Tabular output with a reproducibility header, rendered as CSV or JSON.
 *
 * CSV layout:
 *   # tool: invcrit 1.0.0
 *   # command: <command path>
 *   # config: key=value        (one line per resolved option, sorted by key)
 *   # seed: <root seed>
 *   # result: key=value        (optional summary lines)
 *   col1,col2,...
 *   rows...
 *
 * JSON carries the same information as {"header", "summary", "columns", "rows"}.
 * Requires nlohmann/json on the include path.
 */
#pragma once

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace invcrit::report {

inline constexpr const char* kToolName = "invcrit";
inline constexpr const char* kToolVersion = "1.0.0";

/// Shortest decimal string that round-trips to the same double.
inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

using Cell = std::variant<double, long long, std::string, bool>;

inline std::string cell_text(const Cell& c) {
    struct Visitor {
        std::string operator()(double v) const { return format_number(v); }
        std::string operator()(long long v) const { return std::to_string(v); }
        std::string operator()(const std::string& v) const { return v; }
        std::string operator()(bool v) const { return v ? "true" : "false"; }
    };
    return std::visit(Visitor{}, c);
}

inline std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
    struct Visitor {
        nlohmann::ordered_json operator()(double v) const {
            if (!std::isfinite(v)) return nullptr;
            return v;
        }
        nlohmann::ordered_json operator()(long long v) const { return v; }
        nlohmann::ordered_json operator()(const std::string& v) const { return v; }
        nlohmann::ordered_json operator()(bool v) const { return v; }
    };
    return std::visit(Visitor{}, c);
}

struct Header {
    std::string command;
    std::map<std::string, std::string> config;  ///< resolved options, ordered by key
    std::uint64_t seed = 0;
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
    std::vector<std::pair<std::string, Cell>> summary;

    void add_row(std::vector<Cell> row) { rows.push_back(std::move(row)); }
    void add_summary(std::string key, Cell value) { summary.emplace_back(std::move(key), std::move(value)); }
};

enum class Format { Csv, Json };

inline void write_csv(std::ostream& os, const Header& h, const Table& t) {
    os << "# tool: " << kToolName << ' ' << kToolVersion << '\n';
    os << "# command: " << h.command << '\n';
    for (const auto& [k, v] : h.config) os << "# config: " << k << '=' << v << '\n';
    os << "# seed: " << h.seed << '\n';
    for (const auto& [k, v] : t.summary) os << "# result: " << k << '=' << cell_text(v) << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_escape(cell_text(row[i]));
        os << '\n';
    }
}

inline void write_json(std::ostream& os, const Header& h, const Table& t) {
    nlohmann::ordered_json doc;
    doc["header"]["tool"] = std::string(kToolName) + " " + kToolVersion;
    doc["header"]["command"] = h.command;
    doc["header"]["config"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : h.config) doc["header"]["config"][k] = v;
    doc["header"]["seed"] = h.seed;
    doc["summary"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : t.summary) doc["summary"][k] = cell_json(v);
    doc["columns"] = t.columns;
    doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& row : t.rows) {
        nlohmann::ordered_json r = nlohmann::ordered_json::object();
        for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
        doc["rows"].push_back(std::move(r));
    }
    os << doc.dump(2) << '\n';
}

inline void write(std::ostream& os, Format f, const Header& h, const Table& t) {
    if (f == Format::Json) {
        write_json(os, h, t);
    } else {
        write_csv(os, h, t);
    }
}

/// Recovers the header of a previously written CSV or JSON document.
inline bool parse_header(const std::string& text, Header& out) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return false;
    if (text[first] == '{') {
        const auto doc = nlohmann::json::parse(text, nullptr, false);
        if (doc.is_discarded() || !doc.contains("header")) return false;
        const auto& h = doc["header"];
        if (!h.contains("command") || !h.contains("config") || !h.contains("seed")) return false;
        out.command = h["command"].get<std::string>();
        out.config.clear();
        for (const auto& [k, v] : h["config"].items()) out.config[k] = v.get<std::string>();
        out.seed = h["seed"].get<std::uint64_t>();
        return true;
    }
    std::istringstream in(text);
    std::string line;
    bool have_command = false, have_seed = false;
    out.config.clear();
    while (std::getline(in, line)) {
        if (line.rfind("# ", 0) != 0) break;
        const auto body = line.substr(2);
        if (body.rfind("command: ", 0) == 0) {
            out.command = body.substr(9);
            have_command = true;
        } else if (body.rfind("config: ", 0) == 0) {
            const auto kv = body.substr(8);
            const auto eq = kv.find('=');
            if (eq == std::string::npos) return false;
            out.config[kv.substr(0, eq)] = kv.substr(eq + 1);
        } else if (body.rfind("seed: ", 0) == 0) {
            out.seed = std::stoull(body.substr(6));
            have_seed = true;
        }
    }
    return have_command && have_seed;
}

}  // namespace invcrit::report
