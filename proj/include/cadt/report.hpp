#pragma once

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "types.hpp"

namespace cadt {

// Grouped bar chart rendered as a standalone SVG. values[group][series];
// NaN cells are drawn as gaps. y_max of 0 picks a rounded maximum.
struct BarChart {
    std::string title;
    std::string y_label;
    std::vector<std::string> groups;
    std::vector<std::string> series;
    std::vector<std::vector<double>> values;
    double y_max = 0.0;
};

namespace detail {

class SvgWriter {
  public:
    explicit SvgWriter(std::ostream& out) : out_(out) {}

    void open(int w, int h) {
        print("<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 %d %d\" "
              "font-family=\"sans-serif\">\n", w, h);
    }
    void close() { out_ << "</svg>\n"; }

    void rect(double x, double y, double w, double h, const char* fill) {
        print("<rect x=\"%.2f\" y=\"%.2f\" width=\"%.2f\" height=\"%.2f\" "
              "fill=\"%s\"/>\n", x, y, w, h, fill);
    }
    void line(double x1, double y1, double x2, double y2, const char* stroke,
              double width = 1.0) {
        print("<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
              "stroke=\"%s\" stroke-width=\"%.2f\"/>\n", x1, y1, x2, y2, stroke,
              width);
    }
    void text(double x, double y, const std::string& s, double size,
              const char* anchor = "middle", const std::string& extra = "") {
        print("<text x=\"%.2f\" y=\"%.2f\" font-size=\"%.1f\" "
              "text-anchor=\"%s\"%s>%s</text>\n", x, y, size, anchor,
              extra.c_str(), escape(s).c_str());
    }

    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            if (c == '&') out += "&amp;";
            else if (c == '<') out += "&lt;";
            else if (c == '>') out += "&gt;";
            else out += c;
        }
        return out;
    }

  private:
    void print(const char* fmt, ...) {
        char buf[512];
        va_list args;
        va_start(args, fmt);
        std::vsnprintf(buf, sizeof buf, fmt, args);
        va_end(args);
        out_ << buf;
    }
    std::ostream& out_;
};

inline const char* series_color(size_t i) {
    static const char* colors[] = {"#4477aa", "#ee6677", "#228833", "#ccbb44",
                                   "#66ccee", "#aa3377"};
    return colors[i % (sizeof colors / sizeof colors[0])];
}

}  // namespace detail

inline void write_bar_chart_svg(std::ostream& out, const BarChart& chart) {
    const int kW = 800, kH = 500;
    const double left = 62, right = 16, top = 58, bottom = 92;
    const double plot_w = kW - left - right, plot_h = kH - top - bottom;

    double y_max = chart.y_max;
    if (y_max <= 0.0) {
        double vmax = 0.0;
        for (const auto& row : chart.values)
            for (double v : row)
                if (!std::isnan(v)) vmax = std::max(vmax, v);
        if (vmax <= 0.0) vmax = 1.0;
        double step = std::pow(10.0, std::floor(std::log10(vmax)));
        y_max = step * std::ceil(vmax / step);
        if (y_max < vmax * 1.05) y_max += step;
    }

    detail::SvgWriter svg(out);
    svg.open(kW, kH);
    svg.rect(0, 0, kW, kH, "#ffffff");
    svg.text(kW / 2.0, 26, chart.title, 16);
    svg.text(14, top + plot_h / 2.0, chart.y_label, 11, "middle",
             " transform=\"rotate(-90 14 " + std::to_string(int(top + plot_h / 2)) + ")\"");

    // y axis with 5 gridlines
    for (int t = 0; t <= 5; ++t) {
        double v = y_max * t / 5.0;
        double y = top + plot_h - plot_h * t / 5.0;
        svg.line(left, y, left + plot_w, y, t == 0 ? "#333333" : "#dddddd");
        char lab[32];
        std::snprintf(lab, sizeof lab, "%g", v);
        svg.text(left - 6, y + 3.5, lab, 10, "end");
    }

    const size_t ngroups = chart.groups.size();
    const size_t nseries = chart.series.size();
    if (ngroups && nseries) {
        const double group_w = plot_w / double(ngroups);
        const double slot_w = group_w * 0.82 / double(nseries);
        for (size_t g = 0; g < ngroups; ++g) {
            double gx = left + group_w * double(g) + group_w * 0.09;
            for (size_t s = 0; s < nseries; ++s) {
                double v = g < chart.values.size() && s < chart.values[g].size()
                               ? chart.values[g][s]
                               : std::nan("");
                if (std::isnan(v)) continue;
                double bh = plot_h * std::clamp(v / y_max, 0.0, 1.0);
                double bx = gx + slot_w * double(s);
                double by = top + plot_h - bh;
                svg.rect(bx, by, slot_w * 0.9, bh, detail::series_color(s));
                char lab[32];
                std::snprintf(lab, sizeof lab, "%.1f", v);
                double cx = bx + slot_w * 0.45;
                char extra[96];
                std::snprintf(extra, sizeof extra,
                              " transform=\"rotate(-90 %.2f %.2f)\"", cx, by - 4);
                svg.text(cx, by - 4, lab, 9, "start", extra);
            }
            char extra[96];
            double lx = left + group_w * (double(g) + 0.5);
            std::snprintf(extra, sizeof extra,
                          " transform=\"rotate(-28 %.2f %.2f)\"", lx,
                          top + plot_h + 14);
            svg.text(lx, top + plot_h + 14, chart.groups[g], 10, "end", extra);
        }
        // legend in the top strip
        double lx = left;
        for (size_t s = 0; s < nseries; ++s) {
            svg.rect(lx, 38, 10, 10, detail::series_color(s));
            svg.text(lx + 14, 47, chart.series[s], 11, "start");
            lx += 24 + 7.2 * double(chart.series[s].size());
        }
    }
    svg.close();
}

inline void write_bar_chart_svg(const std::filesystem::path& path,
                                const BarChart& chart) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    write_bar_chart_svg(out, chart);
    out.flush();
    if (!out)
        throw IoError("write failed: " + path.string());
}

}  // namespace cadt
