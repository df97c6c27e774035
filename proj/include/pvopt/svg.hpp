#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pvopt {

// Self-contained deterministic SVG plots on a fixed 960x600 canvas: line
// charts, heatmaps and two-class scatters. No external fonts or scripts.

struct LineSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;  // empty: assigned from the default palette
};

struct HeatmapData {
  std::vector<double> x;       // grid centers along the horizontal axis
  std::vector<double> y;       // grid centers along the vertical axis
  std::vector<double> values;  // row-major: values[xi * y.size() + yi]
  std::string value_label;
};

struct SvgScatterPoint {
  double x = 0.0;
  double y = 0.0;
  bool green = false;
};

namespace svg_detail {

constexpr double kWidth = 960.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 790.0;   // plot area right edge; legend sits beyond
constexpr double kTop = 60.0;
constexpr double kBottom = 540.0;

inline std::string num(double v, int precision = 6) {
  if (!std::isfinite(v)) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, precision);
  if (res.ec != std::errc()) return "0";
  return std::string(buf, res.ptr);
}

inline std::string coord(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  if (res.ec != std::errc()) return "0";
  return std::string(buf, res.ptr);
}

struct AxisScale {
  double lo = 0.0, hi = 1.0;
  double px0 = 0.0, px1 = 1.0;
  double to_px(double v) const { return px0 + (v - lo) / (hi - lo) * (px1 - px0); }
};

inline std::pair<double, double> padded_range(double lo, double hi) {
  if (lo == hi) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.02 * (hi - lo);
  return {lo - pad, hi + pad};
}

inline double nice_step(double range, int target_ticks = 6) {
  const double raw = range / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double norm = raw / mag;
  double snapped = 10.0;
  if (norm < 1.5) snapped = 1.0;
  else if (norm < 3.5) snapped = 2.0;
  else if (norm < 7.5) snapped = 5.0;
  return snapped * mag;
}

inline std::vector<double> ticks(double lo, double hi) {
  const double step = nice_step(hi - lo);
  std::vector<double> out;
  double t = std::ceil(lo / step) * step;
  if (std::abs(t) < 1e-12 * step) t = 0.0;
  for (; t <= hi + 1e-9 * step; t += step) {
    out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return out;
}

inline const char* palette(std::size_t k) {
  static const char* colors[] = {"#1f77b4", "#2ca02c", "#d62728",
                                 "#9467bd", "#ff7f0e", "#17becf"};
  return colors[k % 6];
}

// Five-stop blue-to-yellow ramp for surface plots.
inline std::string heat_color(double t) {
  static const int stops[5][3] = {
      {68, 1, 84}, {59, 82, 139}, {33, 145, 140}, {94, 201, 98}, {253, 231, 37}};
  t = std::clamp(t, 0.0, 1.0);
  const double pos = t * 4.0;
  const int k = std::min(3, static_cast<int>(pos));
  const double f = pos - k;
  const int r = static_cast<int>(std::lround(stops[k][0] + f * (stops[k + 1][0] - stops[k][0])));
  const int g = static_cast<int>(std::lround(stops[k][1] + f * (stops[k + 1][1] - stops[k][1])));
  const int b = static_cast<int>(std::lround(stops[k][2] + f * (stops[k + 1][2] - stops[k][2])));
  return "rgb(" + std::to_string(r) + "," + std::to_string(g) + "," + std::to_string(b) + ")";
}

inline void open_canvas(std::string& out, const std::string& title) {
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"960\" height=\"600\" "
         "viewBox=\"0 0 960 600\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"960\" height=\"600\" fill=\"#ffffff\"/>\n";
  out += "<text x=\"480\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"18\" fill=\"#222222\">" + title + "</text>\n";
}

inline void draw_axes(std::string& out, const AxisScale& xs, const AxisScale& ys,
                      const std::string& x_label, const std::string& y_label) {
  out += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kBottom) + "\" x2=\"" + coord(kRight) +
         "\" y2=\"" + coord(kBottom) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  out += "<line x1=\"" + coord(kLeft) + "\" y1=\"" + coord(kTop) + "\" x2=\"" + coord(kLeft) +
         "\" y2=\"" + coord(kBottom) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  for (double t : ticks(xs.lo, xs.hi)) {
    const double px = xs.to_px(t);
    out += "<line x1=\"" + coord(px) + "\" y1=\"" + coord(kBottom) + "\" x2=\"" + coord(px) +
           "\" y2=\"" + coord(kBottom + 5) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + coord(px) + "\" y=\"" + coord(kBottom + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\" "
           "fill=\"#333333\">" + num(t) + "</text>\n";
  }
  for (double t : ticks(ys.lo, ys.hi)) {
    const double py = ys.to_px(t);
    out += "<line x1=\"" + coord(kLeft - 5) + "\" y1=\"" + coord(py) + "\" x2=\"" + coord(kLeft) +
           "\" y2=\"" + coord(py) + "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
    out += "<text x=\"" + coord(kLeft - 8) + "\" y=\"" + coord(py + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" "
           "fill=\"#333333\">" + num(t) + "</text>\n";
  }
  out += "<text x=\"" + coord((kLeft + kRight) / 2) + "\" y=\"" + coord(kHeight - 15) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
         "fill=\"#222222\">" + x_label + "</text>\n";
  out += "<text x=\"22\" y=\"" + coord((kTop + kBottom) / 2) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" fill=\"#222222\" "
         "transform=\"rotate(-90 22 " + coord((kTop + kBottom) / 2) + ")\">" + y_label +
         "</text>\n";
}

inline void legend_entry(std::string& out, double x, double y, const std::string& color,
                         const std::string& label) {
  out += "<rect x=\"" + coord(x) + "\" y=\"" + coord(y - 9) +
         "\" width=\"14\" height=\"14\" fill=\"" + color + "\"/>\n";
  out += "<text x=\"" + coord(x + 20) + "\" y=\"" + coord(y + 3) +
         "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#222222\">" + label + "</text>\n";
}

inline void write_file(const std::string& body, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!out.good()) throw std::runtime_error("write failed: " + path);
}

}  // namespace svg_detail

inline void write_line_svg(const std::vector<LineSeries>& series, const std::string& path,
                           const std::string& title, const std::string& x_label,
                           const std::string& y_label) {
  using namespace svg_detail;
  if (series.empty()) throw std::invalid_argument("plot data is empty");
  double xlo = 0, xhi = 0, ylo = 0, yhi = 0;
  bool first = true;
  for (const auto& s : series) {
    if (s.x.empty() || s.x.size() != s.y.size()) {
      throw std::invalid_argument("plot data is empty");
    }
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      if (first) {
        xlo = xhi = s.x[k];
        ylo = yhi = s.y[k];
        first = false;
      }
      xlo = std::min(xlo, s.x[k]);
      xhi = std::max(xhi, s.x[k]);
      ylo = std::min(ylo, s.y[k]);
      yhi = std::max(yhi, s.y[k]);
    }
  }
  auto [pxlo, pxhi] = padded_range(xlo, xhi);
  auto [pylo, pyhi] = padded_range(ylo, yhi);
  const AxisScale xs{pxlo, pxhi, kLeft, kRight};
  const AxisScale ys{pylo, pyhi, kBottom, kTop};

  std::string out;
  open_canvas(out, title);
  draw_axes(out, xs, ys, x_label, y_label);
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const std::string color = s.color.empty() ? palette(si) : s.color;
    std::string points;
    for (std::size_t k = 0; k < s.x.size(); ++k) {
      points += coord(xs.to_px(s.x[k])) + "," + coord(ys.to_px(s.y[k]));
      if (k + 1 < s.x.size()) points += ' ';
    }
    out += "<polyline fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\" points=\"" +
           points + "\"/>\n";
    legend_entry(out, kRight + 15, kTop + 20 + 22 * static_cast<double>(si), color, s.label);
  }
  out += "</svg>\n";
  write_file(out, path);
}

inline void write_heatmap_svg(const HeatmapData& grid, const std::string& path,
                              const std::string& title, const std::string& x_label,
                              const std::string& y_label) {
  using namespace svg_detail;
  if (grid.x.empty() || grid.y.empty() || grid.values.size() != grid.x.size() * grid.y.size()) {
    throw std::invalid_argument("plot data is empty");
  }
  const double vlo = *std::min_element(grid.values.begin(), grid.values.end());
  const double vhi = *std::max_element(grid.values.begin(), grid.values.end());
  const double span = vhi > vlo ? vhi - vlo : 1.0;
  const AxisScale xs{grid.x.front(), grid.x.back(), kLeft, kRight};
  const AxisScale ys{grid.y.front(), grid.y.back(), kBottom, kTop};
  const double cw = (kRight - kLeft) / static_cast<double>(grid.x.size());
  const double ch = (kBottom - kTop) / static_cast<double>(grid.y.size());

  std::string out;
  open_canvas(out, title);
  for (std::size_t xi = 0; xi < grid.x.size(); ++xi) {
    for (std::size_t yi = 0; yi < grid.y.size(); ++yi) {
      const double v = grid.values[xi * grid.y.size() + yi];
      const double px = kLeft + cw * static_cast<double>(xi);
      const double py = kBottom - ch * static_cast<double>(yi + 1);
      out += "<rect x=\"" + coord(px) + "\" y=\"" + coord(py) + "\" width=\"" + coord(cw + 0.5) +
             "\" height=\"" + coord(ch + 0.5) + "\" fill=\"" + heat_color((v - vlo) / span) +
             "\"/>\n";
    }
  }
  draw_axes(out, xs, ys, x_label, y_label);
  legend_entry(out, kRight + 15, kTop + 20, heat_color(1.0),
               "high " + grid.value_label + " (" + num(vhi) + ")");
  legend_entry(out, kRight + 15, kTop + 42, heat_color(0.0),
               "low " + grid.value_label + " (" + num(vlo) + ")");
  out += "</svg>\n";
  write_file(out, path);
}

inline void write_scatter_svg(const std::vector<SvgScatterPoint>& points, const std::string& path,
                              const std::string& title, const std::string& x_label,
                              const std::string& y_label, const std::string& green_label,
                              const std::string& red_label) {
  using namespace svg_detail;
  if (points.empty()) throw std::invalid_argument("plot data is empty");
  double xlo = points[0].x, xhi = points[0].x, ylo = points[0].y, yhi = points[0].y;
  for (const auto& p : points) {
    xlo = std::min(xlo, p.x);
    xhi = std::max(xhi, p.x);
    ylo = std::min(ylo, p.y);
    yhi = std::max(yhi, p.y);
  }
  auto [pxlo, pxhi] = padded_range(xlo, xhi);
  auto [pylo, pyhi] = padded_range(ylo, yhi);
  const AxisScale xs{pxlo, pxhi, kLeft, kRight};
  const AxisScale ys{pylo, pyhi, kBottom, kTop};

  std::string out;
  open_canvas(out, title);
  draw_axes(out, xs, ys, x_label, y_label);
  for (const auto& p : points) {
    out += "<circle cx=\"" + coord(xs.to_px(p.x)) + "\" cy=\"" + coord(ys.to_px(p.y)) +
           "\" r=\"4\" fill=\"" + (p.green ? std::string("#2ca02c") : std::string("#d62728")) +
           "\"/>\n";
  }
  legend_entry(out, kRight + 15, kTop + 20, "#2ca02c", green_label);
  legend_entry(out, kRight + 15, kTop + 42, "#d62728", red_label);
  out += "</svg>\n";
  write_file(out, path);
}

}  // namespace pvopt
