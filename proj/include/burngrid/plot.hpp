#pragma once

#include <string>
#include <utility>
#include <vector>

#include "burngrid/engine.hpp"

namespace burngrid {

struct PlotOptions {
  std::string title;
  /// Horizontal dashed lines, (label, density).
  std::vector<std::pair<std::string, double>> reference_lines;
  int width = 800;
  int height = 480;
};

/// Density against t as a standalone SVG document; t axis logarithmic,
/// density axis linear.
std::string density_svg(const DensityTrace& trace, const PlotOptions& options = {});

}  // namespace burngrid
