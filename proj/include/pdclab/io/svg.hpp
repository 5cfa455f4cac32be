#pragma once

#include <string>
#include <vector>

namespace pdclab::io {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct Axes {
  std::string title;
  std::string x_label;
  std::string y_label;
};

std::string line_plot_svg(const Axes &axes, const std::vector<Series> &series);

struct Segment {
  double x0, y0, x1, y1;
};

/// Marching-squares iso-lines of z at `level`; z[i][j] sits at (x[j], y[i]).
std::vector<Segment> contour_segments(const std::vector<double> &x, const std::vector<double> &y,
                                      const std::vector<std::vector<double>> &z, double level);

/// Contour map, one <g class="contour" data-level=...> group per level. Levels
/// never reached on the grid still get a group and a legend entry.
std::string contour_svg(const Axes &axes, const std::vector<double> &x,
                        const std::vector<double> &y,
                        const std::vector<std::vector<double>> &z,
                        const std::vector<double> &levels);

} // namespace pdclab::io
