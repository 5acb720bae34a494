#ifndef DPPBO_SVG_PLOT_HPP
#define DPPBO_SVG_PLOT_HPP

#include <string>
#include <vector>

#include "dppbo/report.hpp"

namespace dppbo {

enum class PlotMetric { kSimple, kCumulative };

struct PlotOptions {
  PlotMetric metric = PlotMetric::kSimple;
  bool log_y = false;
  double log_floor = 1e-12;
  int width = 640;
  int height = 420;
  std::string title;
};

/// One series per AggregateStats (named by its label): mean line plus a
/// filled +/- 1 SE band, each a single <polyline>.
std::string render_svg(const std::vector<AggregateStats>& series, const PlotOptions& options = {});
void emit_plot(const std::string& path, const std::vector<AggregateStats>& series,
               const PlotOptions& options = {});

}  // namespace dppbo

#endif  // DPPBO_SVG_PLOT_HPP
