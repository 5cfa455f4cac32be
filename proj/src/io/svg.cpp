#include "pdclab/io/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "pdclab/errors.hpp"
#include "pdclab/io/table.hpp"

namespace pdclab::io {

namespace {

constexpr double kWidth = 640, kHeight = 480;
constexpr double kLeft = 70, kRight = 150, kTop = 40, kBottom = 60;
constexpr std::array<const char *, 6> kPalette{"#1f77b4", "#d62728", "#2ca02c",
                                               "#9467bd", "#ff7f0e", "#17becf"};

std::string esc(const std::string &s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '&': out += "&amp;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  // two decimals are plenty for pixel coordinates
  return format_number(std::round(v * 100.0) / 100.0);
}

struct Frame {
  double xmin, xmax, ymin, ymax;
  double px(double x) const {
    return kLeft + (x - xmin) / (xmax - xmin) * (kWidth - kLeft - kRight);
  }
  double py(double y) const {
    return kTop + (1.0 - (y - ymin) / (ymax - ymin)) * (kHeight - kTop - kBottom);
  }
};

Frame make_frame(double xmin, double xmax, double ymin, double ymax) {
  if (!(xmax > xmin)) xmax = xmin + 1.0;
  if (!(ymax > ymin)) {
    ymin -= 0.5;
    ymax = ymin + 1.0;
  }
  return {xmin, xmax, ymin, ymax};
}

std::string header(const Axes &axes, const Frame &f) {
  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
       num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s += "<text x=\"" + num(kWidth / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" +
       esc(axes.title) + "</text>\n";
  const double x0 = f.px(f.xmin), x1 = f.px(f.xmax), y0 = f.py(f.ymin), y1 = f.py(f.ymax);
  s += "<rect x=\"" + num(x0) + "\" y=\"" + num(y1) + "\" width=\"" + num(x1 - x0) +
       "\" height=\"" + num(y0 - y1) + "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = f.xmin + (f.xmax - f.xmin) * i / 4.0;
    const double yv = f.ymin + (f.ymax - f.ymin) * i / 4.0;
    s += "<text x=\"" + num(f.px(xv)) + "\" y=\"" + num(y0 + 18) +
         "\" text-anchor=\"middle\" font-size=\"11\">" + format_number(xv) + "</text>\n";
    s += "<text x=\"" + num(x0 - 6) + "\" y=\"" + num(f.py(yv) + 4) +
         "\" text-anchor=\"end\" font-size=\"11\">" + format_number(yv) + "</text>\n";
  }
  s += "<text x=\"" + num((x0 + x1) / 2) + "\" y=\"" + num(kHeight - 15) +
       "\" text-anchor=\"middle\" font-size=\"13\">" + esc(axes.x_label) + "</text>\n";
  s += "<text x=\"18\" y=\"" + num((y0 + y1) / 2) + "\" text-anchor=\"middle\" font-size=\"13\" " +
       "transform=\"rotate(-90 18 " + num((y0 + y1) / 2) + ")\">" + esc(axes.y_label) +
       "</text>\n";
  return s;
}

std::string legend_entry(int row, const std::string &color, const std::string &label) {
  const double y = kTop + 10 + 18 * row;
  const double x = kWidth - kRight + 12;
  return "<line x1=\"" + num(x) + "\" y1=\"" + num(y) + "\" x2=\"" + num(x + 20) + "\" y2=\"" +
         num(y) + "\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n<text x=\"" + num(x + 26) +
         "\" y=\"" + num(y + 4) + "\" font-size=\"11\">" + esc(label) + "</text>\n";
}

} // namespace

std::string line_plot_svg(const Axes &axes, const std::vector<Series> &series) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto &s : series) {
    if (s.x.size() != s.y.size()) throw InvalidInput("series x/y length mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  const Frame f = make_frame(xmin, xmax, ymin, ymax);
  std::string s = header(axes, f);
  for (std::size_t k = 0; k < series.size(); ++k) {
    const std::string color = kPalette[k % kPalette.size()];
    s += "<polyline class=\"series\" fill=\"none\" stroke=\"" + color +
         "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[k].x.size(); ++i) {
      if (!std::isfinite(series[k].x[i]) || !std::isfinite(series[k].y[i])) continue;
      s += num(f.px(series[k].x[i])) + "," + num(f.py(series[k].y[i])) + " ";
    }
    s += "\"/>\n";
    s += legend_entry(static_cast<int>(k), color, series[k].label);
  }
  s += "</svg>\n";
  return s;
}

std::vector<Segment> contour_segments(const std::vector<double> &x, const std::vector<double> &y,
                                      const std::vector<std::vector<double>> &z, double level) {
  if (z.size() != y.size()) throw InvalidInput("contour grid rows must match y");
  for (const auto &row : z)
    if (row.size() != x.size()) throw InvalidInput("contour grid columns must match x");

  std::vector<Segment> segs;
  auto lerp = [level](double a, double b, double za, double zb) {
    const double t = (za == zb) ? 0.5 : (level - za) / (zb - za);
    return a + t * (b - a);
  };
  for (std::size_t i = 0; i + 1 < y.size(); ++i) {
    for (std::size_t j = 0; j + 1 < x.size(); ++j) {
      // corners counter-clockwise from (x_j, y_i)
      const double z0 = z[i][j], z1 = z[i][j + 1], z2 = z[i + 1][j + 1], z3 = z[i + 1][j];
      const int code = (z0 > level) | (z1 > level) << 1 | (z2 > level) << 2 | (z3 > level) << 3;
      if (code == 0 || code == 15) continue;
      // crossing points on the four edges: bottom, right, top, left
      const std::array<std::array<double, 2>, 4> p{{
          {lerp(x[j], x[j + 1], z0, z1), y[i]},
          {x[j + 1], lerp(y[i], y[i + 1], z1, z2)},
          {lerp(x[j], x[j + 1], z3, z2), y[i + 1]},
          {x[j], lerp(y[i], y[i + 1], z0, z3)},
      }};
      auto add = [&](int a, int b) { segs.push_back({p[a][0], p[a][1], p[b][0], p[b][1]}); };
      const bool center_high = 0.25 * (z0 + z1 + z2 + z3) > level;
      switch (code) {
      case 1: case 14: add(3, 0); break;
      case 2: case 13: add(0, 1); break;
      case 3: case 12: add(3, 1); break;
      case 4: case 11: add(1, 2); break;
      case 6: case 9: add(0, 2); break;
      case 7: case 8: add(3, 2); break;
      case 5:
        if (center_high) { add(3, 2); add(0, 1); } else { add(3, 0); add(1, 2); }
        break;
      case 10:
        if (center_high) { add(3, 0); add(1, 2); } else { add(0, 1); add(3, 2); }
        break;
      default: break;
      }
    }
  }
  return segs;
}

std::string contour_svg(const Axes &axes, const std::vector<double> &x,
                        const std::vector<double> &y,
                        const std::vector<std::vector<double>> &z,
                        const std::vector<double> &levels) {
  if (x.empty() || y.empty()) throw InvalidInput("contour grid is empty");
  const Frame f = make_frame(x.front(), x.back(), y.front(), y.back());
  std::string s = header(axes, f);
  for (std::size_t k = 0; k < levels.size(); ++k) {
    const auto segs = contour_segments(x, y, z, levels[k]);
    const std::string color = kPalette[k % kPalette.size()];
    s += "<g class=\"contour\" data-level=\"" + format_number(levels[k]) + "\" data-segments=\"" +
         std::to_string(segs.size()) + "\" stroke=\"" + color + "\" stroke-width=\"1.5\">\n";
    for (const auto &g : segs)
      s += "<line x1=\"" + num(f.px(g.x0)) + "\" y1=\"" + num(f.py(g.y0)) + "\" x2=\"" +
           num(f.px(g.x1)) + "\" y2=\"" + num(f.py(g.y1)) + "\"/>\n";
    s += "</g>\n";
    const std::string label =
        "level " + format_number(levels[k]) + (segs.empty() ? " (not reached)" : "");
    s += legend_entry(static_cast<int>(k), color, label);
  }
  s += "</svg>\n";
  return s;
}

} // namespace pdclab::io
