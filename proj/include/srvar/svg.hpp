#pragma once

#include <string>
#include <vector>

namespace srvar::svg {

struct FanChart {
  std::string title;
  std::vector<double> x;
  std::vector<double> lower;
  std::vector<double> median;
  std::vector<double> upper;
  std::string x_label = "horizon";
};

/// Shaded lower-upper band (polygon), one <path> per band edge, median polyline.
std::string render_fan_chart(const FanChart& chart);

struct ShadowPlot {
  std::string title;
  std::vector<double> observed;  // dashed
  std::vector<double> shadow;    // solid
  double bound = 0.0;
};

std::string render_shadow_plot(const ShadowPlot& plot);

}  // namespace srvar::svg
