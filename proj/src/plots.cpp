#include "crab/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "crab/error.hpp"

namespace crab {

namespace {

namespace fs = std::filesystem;

struct Point {
    double x = 0.0;
    double y = 0.0;
    double band = 0.0; // +- spread, 0 = no band
};

struct Series {
    std::string name;
    std::vector<Point> points;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        out.push_back(line.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// header-indexed CSV rows
struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }
};

Table read_table(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "'");
    Table t;
    std::string line;
    if (std::getline(in, line)) t.header = split_csv(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split_csv(line);
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(c.empty() ? 0.0 : std::stod(c));
        t.rows.push_back(std::move(row));
    }
    return t;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf"};

std::string svg_chart(const std::string& title, const std::string& xlabel,
                      const std::string& ylabel, const std::vector<Series>& series) {
    const double width = 640, height = 420;
    const double ml = 64, mr = 16, mt = 36, mb = 48;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series)
        for (const auto& p : s.points) {
            xmin = std::min(xmin, p.x);
            xmax = std::max(xmax, p.x);
            ymin = std::min(ymin, p.y - p.band);
            ymax = std::max(ymax, p.y + p.band);
        }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
    }
    if (ymin > ymax) {
        ymin = 0;
        ymax = 1;
    }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    auto sx = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
    auto sy = [&](double y) {
        return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << title << "</text>\n";

    // axes with 5 ticks each
    svg << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
        << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n"
        << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
        << height - mb << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double fx = xmin + (xmax - xmin) * i / 4.0;
        const double fy = ymin + (ymax - ymin) * i / 4.0;
        svg << "<text x=\"" << sx(fx) << "\" y=\"" << height - mb + 18
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(fx) << "</text>\n"
            << "<text x=\"" << ml - 6 << "\" y=\"" << sy(fy) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt(fy) << "</text>\n";
    }
    svg << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << xlabel
        << "</text>\n"
        << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 16 " << (mt + height - mb) / 2 << ")\">" << ylabel
        << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof kPalette / sizeof *kPalette)];
        bool has_band = false;
        for (const auto& p : series[s].points)
            if (p.band > 0) has_band = true;
        if (has_band && series[s].points.size() > 1) {
            std::ostringstream poly;
            for (const auto& p : series[s].points)
                poly << sx(p.x) << ',' << sy(p.y + p.band) << ' ';
            for (auto it = series[s].points.rbegin(); it != series[s].points.rend(); ++it)
                poly << sx(it->x) << ',' << sy(it->y - it->band) << ' ';
            svg << "<polygon points=\"" << poly.str() << "\" fill=\"" << color
                << "\" opacity=\"0.15\"/>\n";
        }
        std::ostringstream line;
        for (const auto& p : series[s].points) line << sx(p.x) << ',' << sy(p.y) << ' ';
        svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.8\"/>\n";
        for (const auto& p : series[s].points)
            svg << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y)
                << "\" r=\"2.4\" fill=\"" << color << "\"/>\n";
        svg << "<text x=\"" << width - mr - 6 << "\" y=\"" << mt + 16 * (s + 1)
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\""
            << color << "\">" << series[s].name << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

void write_family(const fs::path& out_dir, const std::string& stem,
                  const std::string& title, const std::string& xlabel,
                  const std::string& ylabel, const std::vector<Series>& series) {
    std::ofstream svg(out_dir / (stem + ".svg"));
    svg << svg_chart(title, xlabel, ylabel, series);

    std::ofstream dat(out_dir / (stem + ".dat"));
    dat << "series\tx\ty\tspread\n";
    for (const auto& s : series)
        for (const auto& p : s.points)
            dat << s.name << '\t' << fmt(p.x) << '\t' << fmt(p.y) << '\t' << fmt(p.band)
                << '\n';
}

} // namespace

int emit_plots(const std::string& in_dir, const std::string& out_dir) {
    const fs::path in(in_dir);
    if (!fs::is_directory(in)) throw IoError("'" + in_dir + "' is not a directory");

    std::map<std::string, Table> summaries; // strategy -> table
    std::map<std::string, Table> trends;
    for (const auto& entry : fs::directory_iterator(in)) {
        const std::string name = entry.path().filename().string();
        auto strip = [&](const std::string& prefix) {
            return name.substr(prefix.size(), name.size() - prefix.size() - 4);
        };
        if (name.rfind("summary_", 0) == 0 && name.size() > 12 && name.ends_with(".csv"))
            summaries[strip("summary_")] = read_table(entry.path());
        else if (name.rfind("trends_", 0) == 0 && name.size() > 11 && name.ends_with(".csv"))
            trends[strip("trends_")] = read_table(entry.path());
    }

    bool any_rows = false;
    for (const auto& [k, t] : summaries)
        if (!t.rows.empty()) any_rows = true;
    if (!any_rows) {
        std::cerr << "emit_plots: no summary rows found under '" << in_dir
                  << "', nothing to plot\n";
        return 0;
    }

    const fs::path out(out_dir);
    fs::create_directories(out);
    int figures = 0;

    {
        std::vector<Series> series;
        for (const auto& [strategy, t] : summaries) {
            const int cx = t.column("labeled_size"), cy = t.column("micro_f1_mean"),
                      cs = t.column("micro_f1_std");
            if (cx < 0 || cy < 0) continue;
            Series s{strategy, {}};
            for (const auto& r : t.rows)
                s.points.push_back({r[cx], r[cy], cs >= 0 ? r[cs] : 0.0});
            series.push_back(std::move(s));
        }
        write_family(out, "f1_vs_labeled", "micro-F1 vs labeled pool size", "labeled size",
                     "micro-F1", series);
        ++figures;
    }
    {
        std::vector<Series> series;
        for (const auto& [strategy, t] : summaries) {
            const int cx = t.column("iteration"), cy = t.column("mean_ir_selected_mean"),
                      cs = t.column("mean_ir_selected_std");
            if (cx < 0 || cy < 0) continue;
            Series s{strategy, {}};
            for (const auto& r : t.rows)
                s.points.push_back({r[cx], r[cy], cs >= 0 ? r[cs] : 0.0});
            series.push_back(std::move(s));
        }
        write_family(out, "batch_meanir", "MeanIR of selected batches", "iteration",
                     "MeanIR", series);
        ++figures;
    }
    if (!trends.empty()) {
        std::vector<Series> series;
        for (const auto& [strategy, t] : trends) {
            const int ci = t.column("iteration"), ch = t.column("hard_count"),
                      cc = t.column("conflict_count");
            if (ci < 0 || ch < 0 || cc < 0) continue;
            // average across seeds per iteration
            std::map<int, std::pair<std::vector<double>, std::vector<double>>> agg;
            for (const auto& r : t.rows) {
                auto& bucket = agg[static_cast<int>(r[ci])];
                bucket.first.push_back(r[ch]);
                bucket.second.push_back(r[cc]);
            }
            Series hard{strategy + " hard", {}};
            Series conflict{strategy + " conflict", {}};
            for (const auto& [it, bucket] : agg) {
                auto mean = [](const std::vector<double>& v) {
                    double m = 0.0;
                    for (double x : v) m += x;
                    return v.empty() ? 0.0 : m / static_cast<double>(v.size());
                };
                hard.points.push_back({static_cast<double>(it), mean(bucket.first), 0.0});
                conflict.points.push_back(
                    {static_cast<double>(it), mean(bucket.second), 0.0});
            }
            series.push_back(std::move(hard));
            series.push_back(std::move(conflict));
        }
        write_family(out, "pool_trends", "hard / negative-conflict pool trends", "iteration",
                     "instances", series);
        ++figures;
    }
    return figures;
}

} // namespace crab
