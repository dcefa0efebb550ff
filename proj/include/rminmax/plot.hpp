#pragma once

#include <string>
#include <vector>

#include "rminmax/trace.hpp"

namespace rminmax {

// One polyline on a convergence plot: the chosen value column of a trace
// against the chosen axis column.
struct PlotSeries {
  const RunTrace* trace = nullptr;
  std::string label;
  RateAxis axis = RateAxis::Iter;
  RateValue value = RateValue::GapUpper;
};

struct PlotOptions {
  std::string title;
  std::string x_label = "iteration";
  std::string y_label = "gap bound";
  bool log_y = true;
  int width = 760;
  int height = 480;
};

// Renders the series to a standalone SVG string. Nonpositive or nonfinite
// values are dropped from log-scale series rather than clamped, so the plot
// never invents data.
std::string render_convergence_svg(const std::vector<PlotSeries>& series,
                                   const PlotOptions& opt);

void write_convergence_svg(const std::vector<PlotSeries>& series,
                           const PlotOptions& opt, const std::string& path);

}  // namespace rminmax
