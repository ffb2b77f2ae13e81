#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "els/errors.hpp"

namespace els {

/// One curve of an SVG line plot.
struct PlotSeries {
    std::string name;
    std::vector<double> x, y;
};

/// Self-contained SVG line plot: axes, ticks, legend, optional log10 y axis.
/// Non-positive y values are dropped in log mode.
inline void write_svg_plot(const std::string& path, const std::string& title,
                           const std::string& xlabel, const std::string& ylabel,
                           std::vector<PlotSeries> series, bool log_y = false) {
    const double width = 860, height = 540;
    const double ml = 90, mr = 180, mt = 50, mb = 60;
    const double pw = width - ml - mr, ph = height - mt - mb;

    if (log_y) {
        for (auto& s : series) {
            std::vector<double> xs, ys;
            for (std::size_t i = 0; i < s.y.size(); ++i)
                if (s.y[i] > 0.0) {
                    xs.push_back(s.x[i]);
                    ys.push_back(std::log10(s.y[i]));
                }
            s.x = std::move(xs);
            s.y = std::move(ys);
        }
    }

    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (first) {
                xmin = xmax = s.x[i];
                ymin = ymax = s.y[i];
                first = false;
            }
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) ymax = ymin + 1;
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return mt + ph - (y - ymin) / (ymax - ymin) * ph; };

    std::ofstream f(path);
    if (!f) throw IoError("svg: cannot open '" + path + "' for writing");
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
      << "' font-family='monospace' font-size='12'>\n";
    f << "<rect width='100%' height='100%' fill='white'/>\n";
    f << "<text x='" << width / 2 << "' y='24' text-anchor='middle' font-size='15'>" << title
      << "</text>\n";

    const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
    f << "<rect x='" << ml << "' y='" << mt << "' width='" << pw << "' height='" << ph
      << "' fill='none' stroke='black'/>\n";

    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + (xmax - xmin) * i / 5.0;
        const double yv = ymin + (ymax - ymin) * i / 5.0;
        char xbuf[32], ybuf[32];
        std::snprintf(xbuf, sizeof(xbuf), "%.4g", xv);
        std::snprintf(ybuf, sizeof(ybuf), log_y ? "1e%.3g" : "%.4g", yv);
        f << "<line x1='" << px(xv) << "' y1='" << mt + ph << "' x2='" << px(xv) << "' y2='"
          << mt + ph + 5 << "' stroke='black'/>\n";
        f << "<text x='" << px(xv) << "' y='" << mt + ph + 20 << "' text-anchor='middle'>" << xbuf
          << "</text>\n";
        f << "<line x1='" << ml - 5 << "' y1='" << py(yv) << "' x2='" << ml << "' y2='" << py(yv)
          << "' stroke='black'/>\n";
        f << "<text x='" << ml - 8 << "' y='" << py(yv) + 4 << "' text-anchor='end'>" << ybuf
          << "</text>\n";
    }
    f << "<text x='" << ml + pw / 2 << "' y='" << height - 15 << "' text-anchor='middle'>"
      << xlabel << "</text>\n";
    f << "<text x='20' y='" << mt + ph / 2 << "' text-anchor='middle' transform='rotate(-90 20 "
      << mt + ph / 2 << ")'>" << (log_y ? "log10 " + ylabel : ylabel) << "</text>\n";

    int ci = 0;
    for (const auto& s : series) {
        const char* color = colors[ci % 6];
        f << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            f << px(s.x[i]) << "," << py(s.y[i]) << " ";
        f << "'/>\n";
        const double ly = mt + 18 + 18 * ci;
        f << "<line x1='" << ml + pw + 10 << "' y1='" << ly << "' x2='" << ml + pw + 34 << "' y2='"
          << ly << "' stroke='" << color << "' stroke-width='2'/>\n";
        f << "<text x='" << ml + pw + 40 << "' y='" << ly + 4 << "'>" << s.name << "</text>\n";
        ++ci;
    }
    f << "</svg>\n";
    if (!f) throw IoError("svg: write failed for '" + path + "'");
}

} // namespace els
