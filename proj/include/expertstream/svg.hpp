#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "expertstream/format.hpp"

namespace expertstream {

// One plotted series; points are (x, y) in data space.
struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  bool draw_line = true;
  bool draw_markers = false;
};

namespace detail {

inline std::string fmt_px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return std::string(buf);
}

// Largest "nice" step (1/2/5 times a power of ten) giving at most ~6 ticks.
inline double nice_step(double range) {
  if (!(range > 0.0)) return 1.0;
  const double rough = range / 5.0;
  const double mag = std::pow(10.0, std::floor(std::log10(rough)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (mag * m >= rough) return mag * m;
  }
  return mag * 10.0;
}

inline std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

// Self-contained SVG chart; no external assets, deterministic output.
inline std::string render_chart(std::string_view title, std::string_view xlabel,
                                std::string_view ylabel, const std::vector<PlotSeries>& series,
                                int width = 960, int height = 600) {
  static constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                             "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
  constexpr int kPaletteSize = 8;

  bool any_point = false;
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const PlotSeries& s : series)
    for (const auto& [x, y] : s.points) {
      any_point = true;
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (!any_point) throw std::invalid_argument("render_chart: no points to plot");
  if (xmax == xmin) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  const double xpad = (xmax - xmin) * 0.04, ypad = (ymax - ymin) * 0.08;
  xmin -= xpad;
  xmax += xpad;
  ymin -= ypad;
  ymax += ypad;

  const double ml = 78, mr = 24, mt = 46, mb = 58;
  const double pw = width - ml - mr, ph = height - mt - mb;
  const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * pw; };
  const auto py = [&](double y) { return mt + (ymax - y) / (ymax - ymin) * ph; };

  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<!-- expertstream-svg 1 -->\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
         "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(width) +
         ' ' + std::to_string(height) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg += "<text x=\"" + detail::fmt_px(width / 2.0) +
         "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
         detail::xml_escape(title) + "</text>\n";

  // axes
  svg += "<line x1=\"" + detail::fmt_px(ml) + "\" y1=\"" + detail::fmt_px(mt + ph) + "\" x2=\"" +
         detail::fmt_px(ml + pw) + "\" y2=\"" + detail::fmt_px(mt + ph) +
         "\" stroke=\"black\"/>\n";
  svg += "<line x1=\"" + detail::fmt_px(ml) + "\" y1=\"" + detail::fmt_px(mt) + "\" x2=\"" +
         detail::fmt_px(ml) + "\" y2=\"" + detail::fmt_px(mt + ph) + "\" stroke=\"black\"/>\n";

  const double xstep = detail::nice_step(xmax - xmin);
  for (double x = std::ceil(xmin / xstep) * xstep; x <= xmax + 1e-12; x += xstep) {
    svg += "<line x1=\"" + detail::fmt_px(px(x)) + "\" y1=\"" + detail::fmt_px(mt + ph) +
           "\" x2=\"" + detail::fmt_px(px(x)) + "\" y2=\"" + detail::fmt_px(mt + ph + 5) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + detail::fmt_px(px(x)) + "\" y=\"" + detail::fmt_px(mt + ph + 20) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + fmt_g9(x) +
           "</text>\n";
  }
  const double ystep = detail::nice_step(ymax - ymin);
  for (double y = std::ceil(ymin / ystep) * ystep; y <= ymax + 1e-12; y += ystep) {
    svg += "<line x1=\"" + detail::fmt_px(ml - 5) + "\" y1=\"" + detail::fmt_px(py(y)) +
           "\" x2=\"" + detail::fmt_px(ml) + "\" y2=\"" + detail::fmt_px(py(y)) +
           "\" stroke=\"black\"/>\n";
    svg += "<text x=\"" + detail::fmt_px(ml - 9) + "\" y=\"" + detail::fmt_px(py(y) + 4) +
           "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt_g9(y) +
           "</text>\n";
  }
  svg += "<text x=\"" + detail::fmt_px(ml + pw / 2.0) + "\" y=\"" +
         detail::fmt_px(height - 14.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" +
         detail::xml_escape(xlabel) + "</text>\n";
  svg += "<text x=\"20\" y=\"" + detail::fmt_px(mt + ph / 2.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 20 " +
         detail::fmt_px(mt + ph / 2.0) + ")\">" + detail::xml_escape(ylabel) + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const PlotSeries& s = series[si];
    const char* color = kPalette[si % kPaletteSize];
    if (s.draw_line && s.points.size() > 1) {
      std::string pts;
      for (const auto& [x, y] : s.points) {
        if (!pts.empty()) pts += ' ';
        pts += detail::fmt_px(px(x)) + ',' + detail::fmt_px(py(y));
      }
      svg += "<polyline fill=\"none\" stroke=\"";
      svg += color;
      svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    }
    if (s.draw_markers || s.points.size() == 1) {
      for (const auto& [x, y] : s.points) {
        svg += "<circle cx=\"" + detail::fmt_px(px(x)) + "\" cy=\"" + detail::fmt_px(py(y)) +
               "\" r=\"2.5\" fill=\"";
        svg += color;
        svg += "\" fill-opacity=\"0.55\"/>\n";
      }
    }
    const double ly = mt + 16.0 * static_cast<double>(si) + 6.0;
    svg += "<rect x=\"" + detail::fmt_px(ml + pw - 150) + "\" y=\"" + detail::fmt_px(ly - 8) +
           "\" width=\"10\" height=\"10\" fill=\"";
    svg += color;
    svg += "\"/>\n";
    svg += "<text x=\"" + detail::fmt_px(ml + pw - 135) + "\" y=\"" + detail::fmt_px(ly + 1) +
           "\" font-family=\"sans-serif\" font-size=\"11\">" + detail::xml_escape(s.label) +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace expertstream
