#pragma once

#include <string>
#include <vector>

namespace regnewt::experiment {

/// Log-log plot of measured points with a fitted and a reference line,
/// ln y = intercept + slope ln x. Both lines are drawn over the x range of the data.
struct RatePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<double> x;
  std::vector<double> y;
  double fitted_slope = 0.0;
  double fitted_intercept = 0.0;
  double reference_slope = 0.0;
  double reference_intercept = 0.0;
  std::string fitted_label = "fit";
  std::string reference_label = "theory";
};

/// Standalone SVG 1.1 document. The output depends only on the plot contents.
/// Throws ConfigurationError when there are no points or a coordinate is not positive.
std::string render_rate_plot(const RatePlot& plot);

}  // namespace regnewt::experiment
