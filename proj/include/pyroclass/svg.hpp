#pragma once

#include <string>
#include <utility>
#include <vector>

namespace pyroclass {

struct ChartSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
  std::string color = "#1f77b4";
  double stroke_width = 2.0;
  bool dashed = false;
  bool markers = true;
};

/// A plain x/y line chart: axes, ticks, polylines and a legend.
struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  double x_min = 0.0, x_max = 1.0;
  double y_min = 0.0, y_max = 1.0;
  std::vector<double> x_ticks;
  std::vector<double> y_ticks;
  std::vector<ChartSeries> series;
  /// Dashed y = x reference line (ROC charts).
  bool diagonal = false;
  int width = 640;
  int height = 480;
};

/// Standalone SVG 1.1 document.
std::string render_svg(const LineChart& chart);

/// Colors cycled by series index.
const std::string& palette(std::size_t i);

} // namespace pyroclass
