#include "pyroclass/svg.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace pyroclass {

namespace {

constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 60;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  if (std::abs(v - std::round(v)) < 1e-9)
    std::snprintf(buf, sizeof buf, "%.0f", v);
  else
    std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
    case '&': out += "&amp;"; break;
    case '<': out += "&lt;"; break;
    case '>': out += "&gt;"; break;
    case '"': out += "&quot;"; break;
    default: out += c;
    }
  }
  return out;
}

} // namespace

const std::string& palette(std::size_t i) {
  static const std::array<std::string, 8> colors{"#d62728", "#1f77b4", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  return colors[i % colors.size()];
}

std::string render_svg(const LineChart& c) {
  const double plot_w = c.width - kLeft - kRight;
  const double plot_h = c.height - kTop - kBottom;
  const double x_span = c.x_max > c.x_min ? c.x_max - c.x_min : 1.0;
  const double y_span = c.y_max > c.y_min ? c.y_max - c.y_min : 1.0;
  auto sx = [&](double x) { return kLeft + (x - c.x_min) / x_span * plot_w; };
  auto sy = [&](double y) { return kTop + plot_h - (y - c.y_min) / y_span * plot_h; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << c.width << "\" height=\""
     << c.height << "\" viewBox=\"0 0 " << c.width << " " << c.height << "\">\n"
     << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
     << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"16\">" << escape(c.title) << "</text>\n";

  // Axes
  os << "<g stroke=\"black\" stroke-width=\"1\">\n"
     << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(kLeft + plot_w)
     << "\" y2=\"" << num(kTop + plot_h) << "\"/>\n"
     << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(kTop) << "\" x2=\"" << num(kLeft) << "\" y2=\""
     << num(kTop + plot_h) << "\"/>\n";
  for (double t : c.x_ticks)
    os << "<line x1=\"" << num(sx(t)) << "\" y1=\"" << num(kTop + plot_h) << "\" x2=\"" << num(sx(t)) << "\" y2=\""
       << num(kTop + plot_h + 5) << "\"/>\n";
  for (double t : c.y_ticks)
    os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(sy(t)) << "\" x2=\"" << num(kLeft) << "\" y2=\""
       << num(sy(t)) << "\"/>\n";
  os << "</g>\n<g font-family=\"sans-serif\" font-size=\"10\">\n";
  for (double t : c.x_ticks)
    os << "<text x=\"" << num(sx(t)) << "\" y=\"" << num(kTop + plot_h + 18) << "\" text-anchor=\"middle\">"
       << tick_label(t) << "</text>\n";
  for (double t : c.y_ticks)
    os << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(sy(t) + 3) << "\" text-anchor=\"end\">"
       << tick_label(t) << "</text>\n";
  os << "</g>\n"
     << "<text x=\"" << num(kLeft + plot_w / 2) << "\" y=\"" << num(c.height - 15)
     << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << escape(c.x_label) << "</text>\n"
     << "<text x=\"18\" y=\"" << num(kTop + plot_h / 2) << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
     << "font-size=\"12\" transform=\"rotate(-90 18 " << num(kTop + plot_h / 2) << ")\">" << escape(c.y_label)
     << "</text>\n";

  if (c.diagonal)
    os << "<line class=\"reference\" x1=\"" << num(sx(c.x_min)) << "\" y1=\"" << num(sy(c.y_min)) << "\" x2=\""
       << num(sx(c.x_max)) << "\" y2=\"" << num(sy(c.y_max))
       << "\" stroke=\"#999999\" stroke-width=\"1\" stroke-dasharray=\"4 4\"/>\n";

  for (const auto& s : c.series) {
    os << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"" << num(s.stroke_width) << "\"";
    if (s.dashed)
      os << " stroke-dasharray=\"6 3\"";
    os << " points=\"";
    for (std::size_t k = 0; k < s.points.size(); ++k)
      os << (k ? " " : "") << num(sx(s.points[k].first)) << "," << num(sy(s.points[k].second));
    os << "\"/>\n";
    if (s.markers)
      for (const auto& [x, y] : s.points)
        os << "<circle cx=\"" << num(sx(x)) << "\" cy=\"" << num(sy(y)) << "\" r=\"2.5\" fill=\"" << s.color
           << "\"/>\n";
  }

  // Legend
  double ly = kTop + 10;
  for (const auto& s : c.series) {
    const double lx = kLeft + plot_w + 15;
    os << "<line x1=\"" << num(lx) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(lx + 20) << "\" y2=\"" << num(ly)
       << "\" stroke=\"" << s.color << "\" stroke-width=\"" << num(s.stroke_width) << "\"/>\n"
       << "<text x=\"" << num(lx + 25) << "\" y=\"" << num(ly + 4)
       << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label) << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
  return os.str();
}

} // namespace pyroclass
