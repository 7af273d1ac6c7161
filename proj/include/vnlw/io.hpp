#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "vnlw/error.hpp"

namespace vnlw {

/// Column-oriented numeric table written as CSV or whitespace-delimited text.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row) {
        if (row.size() != columns.size()) {
            throw Error(ErrorCode::DimensionMismatch, "table row has " + std::to_string(row.size()) +
                                                          " cells for " + std::to_string(columns.size()) +
                                                          " columns");
        }
        rows.push_back(std::move(row));
    }
};

enum class TableFormat { Csv, Json, Gnuplot };

/// 17 significant digits, enough to round-trip any double.
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace io_detail {

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

inline void dump(const nlohmann::ordered_json& j, std::string& out, int indent, int depth) {
    const auto pad = [&](int d) { out.append(static_cast<std::size_t>(indent * d), ' '); };
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            std::size_t i = 0;
            for (const auto& [k, v] : j.items()) {
                pad(depth + 1);
                out += nlohmann::ordered_json(k).dump();
                out += ": ";
                dump(v, out, indent, depth + 1);
                out += ++i < j.size() ? ",\n" : "\n";
            }
            pad(depth);
            out += "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[";
            std::size_t i = 0;
            for (const auto& v : j) {
                dump(v, out, indent, depth + 1);
                if (++i < j.size()) out += ", ";
            }
            out += "]";
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double v = j.get<double>();
            // JSON has no NaN/Inf literals.
            out += std::isfinite(v) ? format_double(v) : "null";
            return;
        }
        default: out += j.dump(); return;
    }
}

}  // namespace io_detail

/// JSON text with every floating-point value printed at 17 significant digits.
inline std::string to_json_text(const nlohmann::ordered_json& j, int indent = 2) {
    std::string out;
    io_detail::dump(j, out, indent, 0);
    out += '\n';
    return out;
}

inline std::string to_csv(const Table& t) {
    std::string out;
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        if (c) out += ',';
        out += io_detail::csv_field(t.columns[c]);
    }
    out += "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            out += format_double(row[c]);
        }
        out += "\r\n";
    }
    return out;
}

inline std::string to_gnuplot(const Table& t) {
    std::string out = "#";
    for (const auto& c : t.columns) out += " " + c;
    out += '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ' ';
            out += format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

inline nlohmann::ordered_json table_json(const Table& t) {
    nlohmann::ordered_json out;
    out["columns"] = t.columns;
    out["rows"] = t.rows;
    return out;
}

inline std::string render_table(const Table& t, TableFormat format) {
    switch (format) {
        case TableFormat::Csv: return to_csv(t);
        case TableFormat::Gnuplot: return to_gnuplot(t);
        case TableFormat::Json: return to_json_text(table_json(t));
    }
    return {};
}

inline const char* table_extension(TableFormat format) {
    switch (format) {
        case TableFormat::Csv: return ".csv";
        case TableFormat::Gnuplot: return ".dat";
        case TableFormat::Json: return ".json";
    }
    return "";
}

namespace io_detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

inline bool parse_double(const std::string& s, double& v) {
    std::istringstream in(s);
    in >> v;
    return !in.fail() && (in >> std::ws).eof();
}

}  // namespace io_detail

/// Reads a two-column (x, U) CSV table. A non-numeric first line is treated as a header.
inline std::pair<std::vector<double>, std::vector<double>> read_potential_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoFailure, "cannot open potential table '" + path + "'");
    std::vector<double> xs, us;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        const auto cells = io_detail::split_csv_line(line);
        double x = 0, u = 0;
        const bool ok = cells.size() == 2 && io_detail::parse_double(cells[0], x) && io_detail::parse_double(cells[1], u);
        if (!ok) {
            if (xs.empty() && lineno == 1) continue;
            throw Error(ErrorCode::InvalidPotential,
                        path + ":" + std::to_string(lineno) + ": expected two numeric columns x,U");
        }
        xs.push_back(x);
        us.push_back(u);
    }
    return {std::move(xs), std::move(us)};
}

}  // namespace vnlw
