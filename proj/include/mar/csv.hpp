#pragma once

// Minimal CSV helpers: numeric series input and fixed-format numeric output.

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mar/series.hpp"

namespace mar::csv {

inline std::vector<std::string> split(const std::string& line, char sep = ',') {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

inline std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) throw data_error("csv: empty numeric field");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || errno == ERANGE) throw data_error("csv: cannot parse number '" + s + "'");
    return v;
}

/// Shortest round-trip-safe text for a double ("nan" for NaN).
inline std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Reads T rows of m*n comma-separated values, each row vec(X_t) in
/// column-stacking order. Blank lines and lines starting with '#' are skipped.
inline MatrixSeries read_series(std::istream& in, Index m, Index n) {
    std::vector<Mat> data;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cells = split(t);
        if (static_cast<Index>(cells.size()) != m * n)
            throw data_error("line " + std::to_string(lineno) + ": expected " + std::to_string(m * n) +
                             " values, found " + std::to_string(cells.size()));
        Mat v(m * n, 1);
        for (Index k = 0; k < m * n; ++k) {
            try {
                v(k, 0) = parse_double(cells[static_cast<std::size_t>(k)]);
            } catch (const data_error& e) {
                throw data_error("line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        if (!v.allFinite()) throw data_error("line " + std::to_string(lineno) + ": non-finite value");
        data.push_back(unvec(v, m, n));
    }
    if (data.empty()) throw data_error("input contains no observations");
    return MatrixSeries(m, n, std::move(data));
}

inline MatrixSeries read_series_file(const std::string& path, Index m, Index n) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open '" + path + "'");
    return read_series(in, m, n);
}

inline void write_series(std::ostream& out, const MatrixSeries& s) {
    for (const Mat& x : s.data()) {
        for (Index k = 0; k < x.size(); ++k) {
            if (k) out << ',';
            out << format_double(x.data()[k]);
        }
        out << '\n';
    }
}

} // namespace mar::csv
