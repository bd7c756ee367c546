// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "overlap/plot.hpp"

namespace overlap::plot {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 150.0;  // legend column
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
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

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return !(lo <= hi); }
};

}  // namespace

std::string render_svg(std::span<const Series> series, const PlotOptions& options) {
  Range xr;
  Range yr;
  for (const Series& s : series)
    for (const auto& [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (options.log_x && x <= 0.0) continue;
      xr.include(options.log_x ? std::log10(x) : x);
      yr.include(y);
    }
  if (xr.empty()) xr = {0.0, 1.0};
  if (yr.empty()) yr = {0.0, 1.0};
  yr.include(0.0);
  if (xr.hi == xr.lo) xr.hi = xr.lo + 1.0;
  if (yr.hi == yr.lo) yr.hi = yr.lo + 1.0;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double x) {
    const double v = options.log_x ? std::log10(x) : x;
    return kLeft + (v - xr.lo) / (xr.hi - xr.lo) * plot_w;
  };
  auto py = [&](double y) { return kTop + (1.0 - (y - yr.lo) / (yr.hi - yr.lo)) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(kWidth) << "\" height=\""
      << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n";
  svg << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight)
      << "\" fill=\"white\"/>\n";
  if (!options.title.empty())
    svg << "<text x=\"" << num(kLeft) << "\" y=\"24\" font-size=\"16\">" << escape(options.title)
        << "</text>\n";

  // Axes with five ticks each.
  const double x0 = kLeft;
  const double y0 = kTop + plot_h;
  svg << "<g class=\"axes\" stroke=\"black\" fill=\"none\">\n";
  svg << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0 + plot_w)
      << "\" y2=\"" << num(y0) << "\"/>\n";
  svg << "<line x1=\"" << num(x0) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(x0)
      << "\" y2=\"" << num(y0) << "\"/>\n";
  svg << "</g>\n";
  svg << "<g class=\"ticks\" font-size=\"11\">\n";
  for (int i = 0; i <= 4; ++i) {
    const double fx = xr.lo + (xr.hi - xr.lo) * i / 4.0;
    const double sx = kLeft + plot_w * i / 4.0;
    const double label_x = options.log_x ? std::pow(10.0, fx) : fx;
    svg << "<line x1=\"" << num(sx) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(sx)
        << "\" y2=\"" << num(y0 + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << num(sx) << "\" y=\"" << num(y0 + 18)
        << "\" text-anchor=\"middle\">" << tick_label(label_x) << "</text>\n";
    const double fy = yr.lo + (yr.hi - yr.lo) * i / 4.0;
    const double sy = py(fy);
    svg << "<line x1=\"" << num(x0 - 5) << "\" y1=\"" << num(sy) << "\" x2=\"" << num(x0)
        << "\" y2=\"" << num(sy) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << num(x0 - 8) << "\" y=\"" << num(sy + 4)
        << "\" text-anchor=\"end\">" << tick_label(fy) << "</text>\n";
  }
  svg << "</g>\n";
  svg << "<text class=\"xlabel\" x=\"" << num(kLeft + plot_w / 2) << "\" y=\""
      << num(kHeight - 18) << "\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(options.x_label) << "</text>\n";
  svg << "<text class=\"ylabel\" x=\"18\" y=\"" << num(kTop + plot_h / 2)
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
      << num(kTop + plot_h / 2) << ")\">" << escape(options.y_label) << "</text>\n";

  std::size_t index = 0;
  for (const Series& s : series) {
    const char* color = s.style == Style::line ? "black" : kPalette[index % std::size(kPalette)];
    svg << "<g class=\"series\" data-label=\"" << escape(s.label) << "\">\n";
    if (s.style == Style::line) {
      svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
      bool first = true;
      for (const auto& [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y) || (options.log_x && x <= 0.0)) continue;
        svg << (first ? "" : " ") << num(px(x)) << ',' << num(py(y));
        first = false;
      }
      svg << "\"/>\n";
    } else {
      for (const auto& [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y) || (options.log_x && x <= 0.0)) continue;
        svg << "<circle cx=\"" << num(px(x)) << "\" cy=\"" << num(py(y)) << "\" r=\"3\" fill=\""
            << color << "\"/>\n";
      }
    }
    const double ly = kTop + 16.0 * static_cast<double>(index) + 8.0;
    const double lx = kWidth - kRight + 12.0;
    svg << "<text class=\"legend\" x=\"" << num(lx + 14) << "\" y=\"" << num(ly + 4)
        << "\" font-size=\"12\">" << escape(s.label) << "</text>\n";
    svg << "<rect x=\"" << num(lx) << "\" y=\"" << num(ly - 4) << "\" width=\"10\" height=\"8\" fill=\""
        << color << "\"/>\n";
    svg << "</g>\n";
    ++index;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace overlap::plot
