#include "burngrid/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace burngrid {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += ch;
    }
  }
  return out;
}

// Smallest axis top from a fixed ladder that is >= v.
double round_up_axis(double v) {
  for (double step : {0.05, 0.1, 0.2, 0.3, 0.5, 0.75, 1.0}) {
    if (v <= step) return step;
  }
  return 1.0;
}

}  // namespace

std::string density_svg(const DensityTrace& trace, const PlotOptions& options) {
  const double left = 70;
  const double right = 30;
  const double top = 40;
  const double bottom = 50;
  const double w = options.width;
  const double h = options.height;
  const double plot_w = w - left - right;
  const double plot_h = h - top - bottom;

  double t_lo = 1.0;
  double t_hi = 10.0;
  double y_max = 0.0;
  if (!trace.entries.empty()) {
    t_lo = static_cast<double>(trace.entries.front().t);
    t_hi = static_cast<double>(trace.entries.back().t);
  }
  for (const TraceEntry& e : trace.entries) y_max = std::max(y_max, e.density);
  for (const auto& ref : options.reference_lines) y_max = std::max(y_max, ref.second);
  y_max = round_up_axis(y_max * 1.05);

  double lx0 = std::log10(t_lo);
  double lx1 = std::log10(t_hi);
  if (lx1 - lx0 < 1e-9) {
    lx0 -= 0.5;
    lx1 += 0.5;
  }
  const auto px = [&](double t) { return left + (std::log10(t) - lx0) / (lx1 - lx0) * plot_w; };
  const auto py = [&](double d) { return top + (1.0 - d / y_max) * plot_h; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << options.width << "\" height=\"" << options.height
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!options.title.empty()) {
    svg << "<text x=\"" << num(w / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(options.title)
        << "</text>\n";
  }
  svg << "<rect x=\"" << num(left) << "\" y=\"" << num(top) << "\" width=\"" << num(plot_w) << "\" height=\""
      << num(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = static_cast<int>(std::ceil(lx0 - 1e-9)); k <= static_cast<int>(std::floor(lx1 + 1e-9)); ++k) {
    const double x = px(std::pow(10.0, k));
    svg << "<line x1=\"" << num(x) << "\" y1=\"" << num(top) << "\" x2=\"" << num(x) << "\" y2=\"" << num(top + plot_h)
        << "\" stroke=\"#ddd\"/>\n";
    svg << "<text x=\"" << num(x) << "\" y=\"" << num(top + plot_h + 18) << "\" text-anchor=\"middle\">1e" << k
        << "</text>\n";
  }
  for (int k = 0; k <= 5; ++k) {
    const double d = y_max * k / 5.0;
    const double y = py(d);
    svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + plot_w) << "\" y2=\""
        << num(y) << "\" stroke=\"#ddd\"/>\n";
    char label[32];
    std::snprintf(label, sizeof label, "%.3g", d);
    svg << "<text x=\"" << num(left - 8) << "\" y=\"" << num(y + 4) << "\" text-anchor=\"end\">" << label
        << "</text>\n";
  }
  svg << "<text x=\"" << num(left + plot_w / 2) << "\" y=\"" << num(h - 10) << "\" text-anchor=\"middle\">t</text>\n";
  svg << "<text x=\"16\" y=\"" << num(top + plot_h / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << num(top + plot_h / 2) << ")\">density</text>\n";

  for (const auto& [label, value] : options.reference_lines) {
    const double y = py(value);
    svg << "<line x1=\"" << num(left) << "\" y1=\"" << num(y) << "\" x2=\"" << num(left + plot_w) << "\" y2=\""
        << num(y) << "\" stroke=\"#c33\" stroke-dasharray=\"6 4\"/>\n";
    svg << "<text x=\"" << num(left + plot_w - 4) << "\" y=\"" << num(y - 4) << "\" text-anchor=\"end\" fill=\"#c33\">"
        << escape(label) << "</text>\n";
  }

  if (!trace.entries.empty()) {
    svg << "<polyline fill=\"none\" stroke=\"#1f5fa8\" stroke-width=\"1.5\" points=\"";
    for (const TraceEntry& e : trace.entries) {
      svg << num(px(static_cast<double>(e.t))) << ',' << num(py(e.density)) << ' ';
    }
    svg << "\"/>\n";
    for (const TraceEntry& e : trace.entries) {
      svg << "<circle cx=\"" << num(px(static_cast<double>(e.t))) << "\" cy=\"" << num(py(e.density))
          << "\" r=\"2\" fill=\"#1f5fa8\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace burngrid
