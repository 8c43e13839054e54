#include "geq/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "geq/errors.hpp"

namespace geq {

SvgPlot::SvgPlot(std::string title, std::string xlabel, std::string ylabel)
    : title_(std::move(title)), xlabel_(std::move(xlabel)), ylabel_(std::move(ylabel)) {}

void SvgPlot::add_line(const std::vector<double>& xs, const std::vector<double>& ys,
                       const std::string& color, const std::string& label) {
    series_.push_back({xs, ys, color, label, false, false});
}

void SvgPlot::add_points(const std::vector<double>& xs, const std::vector<double>& ys,
                         const std::string& color, const std::string& label) {
    series_.push_back({xs, ys, color, label, true, false});
}

void SvgPlot::add_polygon(const std::vector<Vec>& poly, const std::string& color,
                          const std::string& label) {
    Series s;
    for (const Vec& p : poly) {
        s.xs.push_back(p[0]);
        s.ys.push_back(p[1]);
    }
    s.color = color;
    s.label = label;
    s.closed = true;
    series_.push_back(std::move(s));
}

void SvgPlot::write(const std::string& path, const std::string& provenance) const {
    const double W = 640, H = 480, ml = 70, mr = 20, mt = 40, mb = 50;
    double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
    bool first = true;
    for (const auto& s : series_)
        for (size_t i = 0; i < s.xs.size(); ++i) {
            if (!std::isfinite(s.xs[i]) || !std::isfinite(s.ys[i])) continue;
            if (first) {
                x0 = x1 = s.xs[i];
                y0 = y1 = s.ys[i];
                first = false;
            }
            x0 = std::min(x0, s.xs[i]);
            x1 = std::max(x1, s.xs[i]);
            y0 = std::min(y0, s.ys[i]);
            y1 = std::max(y1, s.ys[i]);
        }
    if (x1 - x0 < 1e-12) x1 = x0 + 1;
    if (y1 - y0 < 1e-12) y1 = y0 + 1;
    const double padx = 0.05 * (x1 - x0), pady = 0.05 * (y1 - y0);
    x0 -= padx, x1 += padx, y0 -= pady, y1 += pady;
    const auto sx = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    const auto sy = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    out << "<!-- " << provenance << " -->\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << strf("<text x=\"%.0f\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">", W / 2)
        << title_ << "</text>\n";
    // axes with 5 ticks each
    out << strf("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", ml,
                H - mb, W - mr, H - mb);
    out << strf("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"black\"/>\n", ml,
                mt, ml, H - mb);
    for (int i = 0; i <= 5; ++i) {
        const double xv = x0 + (x1 - x0) * i / 5.0;
        const double yv = y0 + (y1 - y0) * i / 5.0;
        out << strf(
            "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"middle\">%.3g</text>\n",
            sx(xv), H - mb + 16, xv);
        out << strf(
            "<text x=\"%.1f\" y=\"%.1f\" font-size=\"10\" text-anchor=\"end\">%.3g</text>\n",
            ml - 6, sy(yv) + 3, yv);
        out << strf("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>\n",
                    sx(xv), H - mb, sx(xv), mt);
        out << strf("<line x1=\"%.1f\" y1=\"%.1f\" x2=\"%.1f\" y2=\"%.1f\" stroke=\"#ccc\"/>\n",
                    ml, sy(yv), W - mr, sy(yv));
    }
    out << strf("<text x=\"%.0f\" y=\"%.0f\" font-size=\"12\" text-anchor=\"middle\">", W / 2,
                H - 12)
        << xlabel_ << "</text>\n";
    out << strf("<text x=\"16\" y=\"%.0f\" font-size=\"12\" text-anchor=\"middle\" "
                "transform=\"rotate(-90 16 %.0f)\">",
                H / 2, H / 2)
        << ylabel_ << "</text>\n";

    double legend_y = mt + 8;
    for (const auto& s : series_) {
        if (s.points) {
            for (size_t i = 0; i < s.xs.size(); ++i)
                out << strf("<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"%s\"/>\n",
                            sx(s.xs[i]), sy(s.ys[i]), s.color.c_str());
        } else {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
            for (size_t i = 0; i < s.xs.size(); ++i)
                out << strf("%.2f,%.2f ", sx(s.xs[i]), sy(s.ys[i]));
            if (s.closed && !s.xs.empty()) out << strf("%.2f,%.2f", sx(s.xs[0]), sy(s.ys[0]));
            out << "\"/>\n";
        }
        if (!s.label.empty()) {
            out << strf("<rect x=\"%.1f\" y=\"%.1f\" width=\"10\" height=\"10\" fill=\"%s\"/>",
                        W - mr - 150.0, legend_y - 9, s.color.c_str());
            out << strf("<text x=\"%.1f\" y=\"%.1f\" font-size=\"11\">", W - mr - 135.0, legend_y)
                << s.label << "</text>\n";
            legend_y += 16;
        }
    }
    out << "</svg>\n";
}

}  // namespace geq
