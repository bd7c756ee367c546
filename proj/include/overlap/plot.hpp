// Copyright 2026 The overlap authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

// Minimal static SVG line/marker plots. Output depends only on the input, so
// identical data gives byte-identical files.
namespace overlap::plot {

enum class Style { line, markers };

struct Series {
  std::string label;
  Style style = Style::markers;
  std::vector<std::pair<double, double>> points;
};

struct PlotOptions {
  bool log_x = false;
  std::string x_label = "xi";
  std::string y_label = "Phi";
  std::string title;
};

std::string render_svg(std::span<const Series> series, const PlotOptions& options = {});

}  // namespace overlap::plot
