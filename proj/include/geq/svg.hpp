#ifndef GEQ_SVG_HPP
#define GEQ_SVG_HPP

#include <string>
#include <vector>

#include "geq/common.hpp"

namespace geq {

/// Minimal standalone SVG line/scatter plot, no toolchain dependency.
/// Data always goes to CSV as well; this is for quick inspection.
class SvgPlot {
  public:
    SvgPlot(std::string title, std::string xlabel, std::string ylabel);

    void add_line(const std::vector<double>& xs, const std::vector<double>& ys,
                  const std::string& color, const std::string& label = "");
    void add_points(const std::vector<double>& xs, const std::vector<double>& ys,
                    const std::string& color, const std::string& label = "");
    /// Closed polygon outline in data coordinates.
    void add_polygon(const std::vector<Vec>& poly, const std::string& color,
                     const std::string& label = "");

    void write(const std::string& path, const std::string& provenance) const;

  private:
    struct Series {
        std::vector<double> xs, ys;
        std::string color, label;
        bool points = false;
        bool closed = false;
    };
    std::string title_, xlabel_, ylabel_;
    std::vector<Series> series_;
};

}  // namespace geq

#endif
