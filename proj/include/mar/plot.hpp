#pragma once

// Static SVG charts of benchmark rows, each with a plain-text sidecar
// (same stem, ".dat") listing exactly the plotted values.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mar/bench.hpp"
#include "mar/csv.hpp"

namespace mar::plot {

enum class Kind { kVsSize, kVsLength, kTimeSurface };

inline Kind parse_kind(const std::string& s) {
    if (s == "vs_size") return Kind::kVsSize;
    if (s == "vs_length") return Kind::kVsLength;
    if (s == "time_surface") return Kind::kTimeSurface;
    throw model_error("unknown plot kind '" + s + "'");
}

/// Mean metrics of the successful rows of one (estimator, m, T) cell.
struct CellMeans {
    std::size_t count = 0;
    double mae = 0.0, rmse = 0.0, smape = 0.0, fit_seconds = 0.0;
};

using CellKey = std::tuple<std::string, long, long>;  // estimator, m, T

/// Parses a rows.csv produced by run_grid into per-cell means.
inline std::map<CellKey, CellMeans> read_cell_means(std::istream& in) {
    std::string line;
    std::vector<std::string> header;
    std::map<CellKey, CellMeans> cells;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        auto cells_txt = csv::split(csv::trim(line));
        if (header.empty()) {
            header = cells_txt;
            continue;
        }
        if (cells_txt.size() != header.size())
            throw data_error("rows csv line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) +
                             " fields");
        auto col = [&](const char* name) -> const std::string& {
            auto it = std::find(header.begin(), header.end(), name);
            if (it == header.end()) throw data_error(std::string("rows csv: missing column ") + name);
            return cells_txt[static_cast<std::size_t>(it - header.begin())];
        };
        if (col("status") != "ok") continue;
        try {
            CellKey key{col("estimator"), std::stol(col("m")), std::stol(col("T"))};
            CellMeans& c = cells[key];
            c.count += 1;
            c.mae += csv::parse_double(col("mae"));
            c.rmse += csv::parse_double(col("rmse"));
            c.smape += csv::parse_double(col("smape"));
            c.fit_seconds += csv::parse_double(col("fit_seconds"));
        } catch (const std::logic_error&) {
            throw data_error("rows csv line " + std::to_string(lineno) + ": malformed integer field");
        }
    }
    if (header.empty()) throw data_error("rows csv: no header line");
    for (auto& [key, c] : cells) {
        const double k = static_cast<double>(c.count);
        c.mae /= k;
        c.rmse /= k;
        c.smape /= k;
        c.fit_seconds /= k;
    }
    return cells;
}

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct Panel {
    std::string title;
    std::string x_label;
    std::vector<Series> series;
};

namespace detail {

inline const char* palette(std::size_t i) {
    static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"};
    return colors[i % 7];
}

inline std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline void line_panel(std::ostream& svg, const Panel& p, double ox, double oy, double w, double h) {
    double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
    for (const auto& s : p.series)
        for (auto [x, y] : s.points) {
            x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
        }
    if (x1 == x0) x0 -= 1, x1 += 1;
    if (y1 == y0) y0 -= std::max(1e-12, std::abs(y0) * 0.1), y1 += std::max(1e-12, std::abs(y1) * 0.1);
    const double l = ox + 60, r = ox + w - 10, t = oy + 30, b = oy + h - 40;
    auto sx = [&](double x) { return l + (x - x0) / (x1 - x0) * (r - l); };
    auto sy = [&](double y) { return b - (y - y0) / (y1 - y0) * (b - t); };
    svg << "<text x=\"" << num(ox + w / 2) << "\" y=\"" << num(oy + 18)
        << "\" text-anchor=\"middle\" font-size=\"14\">" << p.title << "</text>\n";
    svg << "<rect x=\"" << num(l) << "\" y=\"" << num(t) << "\" width=\"" << num(r - l) << "\" height=\""
        << num(b - t) << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double yv = y0 + (y1 - y0) * k / 4.0;
        svg << "<text x=\"" << num(l - 4) << "\" y=\"" << num(sy(yv) + 4)
            << "\" text-anchor=\"end\" font-size=\"10\">" << num(yv) << "</text>\n";
    }
    std::set<double> xs;
    for (const auto& s : p.series)
        for (auto [x, y] : s.points) xs.insert(x);
    for (double x : xs)
        svg << "<text x=\"" << num(sx(x)) << "\" y=\"" << num(b + 14) << "\" text-anchor=\"middle\" font-size=\"10\">"
            << num(x) << "</text>\n";
    svg << "<text x=\"" << num((l + r) / 2) << "\" y=\"" << num(b + 30)
        << "\" text-anchor=\"middle\" font-size=\"11\">" << p.x_label << "</text>\n";
    for (std::size_t i = 0; i < p.series.size(); ++i) {
        const auto& s = p.series[i];
        svg << "<polyline fill=\"none\" stroke=\"" << palette(i) << "\" stroke-width=\"1.5\" points=\"";
        for (auto [x, y] : s.points) svg << num(sx(x)) << ',' << num(sy(y)) << ' ';
        svg << "\"/>\n";
        for (auto [x, y] : s.points)
            svg << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"2.5\" fill=\"" << palette(i)
                << "\"/>\n";
        svg << "<text x=\"" << num(l + 6) << "\" y=\"" << num(t + 14 + 12 * static_cast<double>(i))
            << "\" font-size=\"10\" fill=\"" << palette(i) << "\">" << s.label << "</text>\n";
    }
}

} // namespace detail

struct PlotRequest {
    Kind kind = Kind::kVsSize;
    std::optional<long> fix_length;  // vs_size
    std::optional<long> fix_size;    // vs_length
    std::vector<std::string> estimators;  // empty: all present
    std::filesystem::path out_dir = "figs";
};

struct PlotOutput {
    std::filesystem::path svg;
    std::filesystem::path sidecar;
    std::vector<Panel> panels;
};

/// Builds the panels for `req` from per-cell means; throws data_error when
/// the selection is empty.
inline std::vector<Panel> build_panels(const std::map<CellKey, CellMeans>& cells, const PlotRequest& req) {
    auto wanted = [&](const std::string& est) {
        return req.estimators.empty() ||
               std::find(req.estimators.begin(), req.estimators.end(), est) != req.estimators.end();
    };
    std::vector<Panel> panels;
    if (req.kind == Kind::kTimeSurface) {
        std::map<std::string, Panel> by_est;
        for (const auto& [key, c] : cells) {
            const auto& [est, m, T] = key;
            if (!wanted(est)) continue;
            Panel& p = by_est[est];
            p.title = est + ": mean fit seconds";
            p.x_label = "T";
            auto it = std::find_if(p.series.begin(), p.series.end(),
                                   [&](const Series& s) { return s.label == "m=" + std::to_string(m); });
            if (it == p.series.end()) {
                p.series.push_back({"m=" + std::to_string(m), {}});
                it = std::prev(p.series.end());
            }
            it->points.emplace_back(static_cast<double>(T), c.fit_seconds);
        }
        for (auto& [est, p] : by_est) panels.push_back(std::move(p));
    } else {
        const bool vs_size = req.kind == Kind::kVsSize;
        std::optional<long> fixed = vs_size ? req.fix_length : req.fix_size;
        if (!fixed) {
            std::set<long> values;
            for (const auto& [key, c] : cells) values.insert(vs_size ? std::get<2>(key) : std::get<1>(key));
            if (values.size() == 1) fixed = *values.begin();
            else
                throw model_error(vs_size ? "vs_size needs --fix-length when several lengths are present"
                                          : "vs_length needs --fix-size when several sizes are present");
        }
        const char* names[] = {"MAE", "RMSE", "SMAPE", "fit seconds"};
        for (int metric = 0; metric < 4; ++metric) {
            Panel p;
            p.title = std::string(names[metric]) + (vs_size ? " (T=" : " (m=") + std::to_string(*fixed) + ")";
            p.x_label = vs_size ? "matrix size m" : "series length T";
            std::map<std::string, Series> by_est;
            for (const auto& [key, c] : cells) {
                const auto& [est, m, T] = key;
                if (!wanted(est) || (vs_size ? T : m) != *fixed) continue;
                const double y = metric == 0 ? c.mae : metric == 1 ? c.rmse : metric == 2 ? c.smape : c.fit_seconds;
                by_est[est].label = est;
                by_est[est].points.emplace_back(static_cast<double>(vs_size ? m : T), y);
            }
            for (auto& [est, s] : by_est) {
                std::sort(s.points.begin(), s.points.end());
                p.series.push_back(std::move(s));
            }
            if (!p.series.empty()) panels.push_back(std::move(p));
        }
    }
    if (panels.empty()) throw data_error("no data for the requested plot selection");
    return panels;
}

inline std::string plot_stem(const PlotRequest& req) {
    switch (req.kind) {
        case Kind::kVsSize: return "vs_size" + (req.fix_length ? "_T" + std::to_string(*req.fix_length) : "");
        case Kind::kVsLength: return "vs_length" + (req.fix_size ? "_m" + std::to_string(*req.fix_size) : "");
        case Kind::kTimeSurface: return "time_surface";
    }
    return "plot";
}

/// Writes <stem>.svg and <stem>.dat. Sidecar lines: panel<TAB>series<TAB>x<TAB>y
/// with y printed round-trip exact.
inline PlotOutput plot_results(const std::map<CellKey, CellMeans>& cells, const PlotRequest& req) {
    PlotOutput out;
    out.panels = build_panels(cells, req);
    std::filesystem::create_directories(req.out_dir);
    const std::string stem = plot_stem(req);
    out.svg = req.out_dir / (stem + ".svg");
    out.sidecar = req.out_dir / (stem + ".dat");

    const double pw = 420, ph = 300;
    const std::size_t cols = 2;
    const std::size_t rows = (out.panels.size() + cols - 1) / cols;
    std::ofstream svg(out.svg, std::ios::binary);
    std::ofstream dat(out.sidecar, std::ios::binary);
    if (!svg || !dat) throw data_error("cannot write plot files into " + req.out_dir.string());
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << detail::num(pw * cols) << "\" height=\""
        << detail::num(ph * static_cast<double>(rows)) << "\" font-family=\"sans-serif\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    dat << "# panel\tseries\tx\ty\n";
    for (std::size_t i = 0; i < out.panels.size(); ++i) {
        const Panel& p = out.panels[i];
        detail::line_panel(svg, p, pw * static_cast<double>(i % cols), ph * static_cast<double>(i / cols), pw, ph);
        for (const auto& s : p.series)
            for (auto [x, y] : s.points)
                dat << p.title << '\t' << s.label << '\t' << csv::format_double(x) << '\t' << csv::format_double(y)
                    << '\n';
    }
    svg << "</svg>\n";
    return out;
}

inline PlotOutput plot_results(const std::filesystem::path& rows_csv, const PlotRequest& req) {
    std::ifstream in(rows_csv);
    if (!in) throw data_error("cannot open '" + rows_csv.string() + "'");
    return plot_results(read_cell_means(in), req);
}

} // namespace mar::plot
