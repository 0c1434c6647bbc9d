#pragma once

// Minimal CSV tables: a header plus string cells. Numbers are written in the
// shortest form that parses back to the same double, so parse -> emit is
// byte-stable.

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "pensim/error.hpp"

namespace pensim::io {

inline std::string format_number(double v) {
    if (std::isnan(v)) return "";
    if (v == 0.0) return "0";  // folds -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

// Fixed decimals, for report-style output.
inline std::string format_fixed(double v, int decimals) {
    if (std::isnan(v)) return "";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, decimals);
    std::string s(buf, res.ptr);
    if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
    return s;
}

inline double parse_number(std::string_view s, std::string_view context = {}) {
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
        throw DataError("cannot parse number '" + std::string(s) + "'" +
                        (context.empty() ? "" : " in " + std::string(context)));
    }
    return v;
}

inline std::optional<double> parse_optional_number(std::string_view s, std::string_view context = {}) {
    if (s.find_first_not_of(" \r") == std::string_view::npos) return std::nullopt;
    return parse_number(s, context);
}

inline int parse_int(std::string_view s, std::string_view context = {}) {
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    int v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || s.empty()) {
        throw DataError("cannot parse integer '" + std::string(s) + "'" +
                        (context.empty() ? "" : " in " + std::string(context)));
    }
    return v;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(std::string_view name) const {
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (header[i] == name) return i;
        }
        throw DataError("CSV is missing column '" + std::string(name) + "'");
    }

    void require_header(const std::vector<std::string>& expected, std::string_view what) const {
        if (header != expected) {
            std::string want;
            for (const auto& h : expected) want += (want.empty() ? "" : ",") + h;
            throw DataError(std::string(what) + ": expected header '" + want + "'");
        }
    }
};

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
    std::vector<std::string> cells;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cell += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            cells.push_back(std::move(cell));
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    if (quoted) throw DataError("unterminated quote on CSV line " + std::to_string(line_no));
    cells.push_back(std::move(cell));
    return cells;
}

inline std::string quote_cell(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

} // namespace detail

inline CsvTable parse_csv(std::string_view text) {
    CsvTable table;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    bool have_header = false;
    while (pos <= text.size()) {
        const auto end = text.find('\n', pos);
        std::string_view line = text.substr(pos, end == std::string_view::npos ? std::string_view::npos : end - pos);
        pos = end == std::string_view::npos ? text.size() + 1 : end + 1;
        ++line_no;
        if (line.empty() || line == "\r") continue;
        auto cells = detail::split_csv_line(line, line_no);
        if (!have_header) {
            table.header = std::move(cells);
            have_header = true;
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw DataError("CSV line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " fields, expected " + std::to_string(table.header.size()));
        }
        table.rows.push_back(std::move(cells));
    }
    if (!have_header) throw DataError("CSV input is empty");
    return table;
}

inline std::string to_csv(const CsvTable& table) {
    std::string out;
    auto emit = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += detail::quote_cell(cells[i]);
        }
        out += '\n';
    };
    emit(table.header);
    for (const auto& r : table.rows) emit(r);
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// std::ios_base::failure is a std::system_error; callers map it to I/O exit codes.
inline void write_file(const std::string& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::ios_base::failure("cannot write '" + path + "'");
    out << contents;
    if (!out) throw std::ios_base::failure("write failed for '" + path + "'");
}

inline CsvTable read_csv(const std::string& path) { return parse_csv(read_file(path)); }

inline void write_csv(const std::string& path, const CsvTable& table) { write_file(path, to_csv(table)); }

} // namespace pensim::io
