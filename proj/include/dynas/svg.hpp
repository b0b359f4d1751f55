#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include "dynas/ert.hpp"

namespace dynas {

// Minimal fixed-target plot: target on a linear x axis, ERT on a log10 y
// axis, one polyline per curve. Presentation only; infinite points are
// dropped.
struct SvgCurve {
    std::string label;
    std::vector<CurvePoint> points;
};

inline void write_fixed_target_svg(const std::vector<SvgCurve> &curves, const std::string &title,
                                   std::ostream &out) {
    constexpr double width = 760, height = 460;
    constexpr double ml = 70, mr = 180, mt = 40, mb = 50;
    const double plot_w = width - ml - mr, plot_h = height - mt - mb;

    double xmin = 0, xmax = 1, ymin = 1, ymax = 10;
    bool any = false;
    for (const auto &c : curves)
        for (const auto &p : c.points) {
            if (std::isinf(p.ert) || p.ert <= 0)
                continue;
            if (!any) {
                xmin = xmax = p.target;
                ymin = ymax = p.ert;
                any = true;
            } else {
                xmin = std::min(xmin, p.target);
                xmax = std::max(xmax, p.target);
                ymin = std::min(ymin, p.ert);
                ymax = std::max(ymax, p.ert);
            }
        }
    if (xmax == xmin)
        xmax = xmin + 1;
    if (ymax == ymin)
        ymax = ymin * 10;
    const double ly_min = std::log10(ymin), ly_max = std::log10(ymax);

    const auto sx = [&](double t) { return ml + (t - xmin) / (xmax - xmin) * plot_w; };
    const auto sy = [&](double e) { return mt + plot_h - (std::log10(e) - ly_min) / (ly_max - ly_min) * plot_h; };

    static const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    constexpr int palette_size = 10;

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << ml << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\">" << title
        << "</text>\n";
    out << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << plot_w << "\" height=\"" << plot_h
        << "\" fill=\"none\" stroke=\"#333\"/>\n";

    for (int k = 0; k <= 4; ++k) {
        const double t = xmin + (xmax - xmin) * k / 4;
        out << "<text x=\"" << sx(t) << "\" y=\"" << height - mb + 18
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">" << format_double(t)
            << "</text>\n";
    }
    for (int k = 0; k <= 4; ++k) {
        const double e = std::pow(10.0, ly_min + (ly_max - ly_min) * k / 4);
        out << "<text x=\"" << ml - 6 << "\" y=\"" << sy(e) + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
            << format_double(std::round(e)) << "</text>\n";
    }
    out << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 10
        << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">target</text>\n";
    out << "<text x=\"16\" y=\"" << mt + plot_h / 2
        << "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 " << mt + plot_h / 2
        << ")\" text-anchor=\"middle\">ERT (log)</text>\n";

    int idx = 0;
    for (const auto &c : curves) {
        const char *color = palette[idx % palette_size];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (const auto &p : c.points) {
            if (std::isinf(p.ert) || p.ert <= 0)
                continue;
            out << sx(p.target) << "," << sy(p.ert) << " ";
        }
        out << "\"/>\n";
        const double ly = mt + 16 + 16 * idx;
        out << "<line x1=\"" << width - mr + 8 << "\" y1=\"" << ly - 4 << "\" x2=\"" << width - mr + 28
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"1.6\"/>\n";
        out << "<text x=\"" << width - mr + 32 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"10\">" << c.label << "</text>\n";
        ++idx;
    }
    out << "</svg>\n";
}

} // namespace dynas
