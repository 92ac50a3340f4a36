// csv.hpp
// Fixed-format CSV output: ',' delimiter, '\n' line endings, 17 significant
// digits, "inf"/"nan" for non-finite values.

#pragma once

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

namespace nhbrach {

inline std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// One CSV cell: a number or a bare token.
struct Cell {
    std::string text;
    Cell(double v) : text(format_real(v)) {}
    Cell(int v) : text(std::to_string(v)) {}
    Cell(std::size_t v) : text(std::to_string(v)) {}
    Cell(const char* s) : text(s) {}
    Cell(std::string s) : text(std::move(s)) {}
};

using Row = std::vector<Cell>;

inline void write_row(std::ostream& out, const Row& row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << row[i].text;
    }
    out << '\n';
}

inline void write_header(std::ostream& out, std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* c : cols) {
        if (!first) out << ',';
        out << c;
        first = false;
    }
    out << '\n';
}

/// Splits one CSV line (no quoting).
inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

}  // namespace nhbrach
