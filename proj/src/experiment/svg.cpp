#include "regnewt/experiment/svg.hpp"

#include "regnewt/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace regnewt::experiment {

namespace {

constexpr double kWidth = 640.0, kHeight = 480.0;
constexpr double kLeft = 80.0, kRight = 40.0, kTop = 50.0, kBottom = 60.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
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

struct Axis {
  double lo, hi;  // log10 range
  double px0, px1;
  double map(double log10v) const { return px0 + (log10v - lo) / (hi - lo) * (px1 - px0); }
};

Axis make_axis(double lo, double hi, double px0, double px1) {
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.05 * (hi - lo);
  return Axis{lo - pad, hi + pad, px0, px1};
}

// Decade ticks inside the range; the data end points when fewer than two decades fit.
std::vector<double> ticks(const Axis& a, double data_lo, double data_hi) {
  std::vector<double> t;
  for (double d = std::ceil(a.lo); d <= std::floor(a.hi); d += 1.0) t.push_back(d);
  if (t.size() < 2) {
    t = {data_lo, data_hi};
    if (data_hi - data_lo < 1e-9) t = {data_lo};
  }
  return t;
}

}  // namespace

std::string render_rate_plot(const RatePlot& plot) {
  if (plot.x.empty() || plot.x.size() != plot.y.size()) throw ConfigurationError("rate plot needs matching points");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < plot.x.size(); ++i) {
    if (!(plot.x[i] > 0.0) || !(plot.y[i] > 0.0) || !std::isfinite(plot.x[i]) || !std::isfinite(plot.y[i]))
      throw ConfigurationError("rate plot coordinates must be positive and finite");
    lx.push_back(std::log10(plot.x[i]));
    ly.push_back(std::log10(plot.y[i]));
  }
  const auto [xmin_it, xmax_it] = std::minmax_element(lx.begin(), lx.end());
  const double xmin = *xmin_it, xmax = *xmax_it;
  // Line values at the ends of the x range, in log10.
  auto line = [](double slope, double intercept, double l10x) {
    return (intercept + slope * l10x * std::log(10.0)) / std::log(10.0);
  };
  std::vector<double> yall = ly;
  for (double xe : {xmin, xmax}) {
    yall.push_back(line(plot.fitted_slope, plot.fitted_intercept, xe));
    yall.push_back(line(plot.reference_slope, plot.reference_intercept, xe));
  }
  const auto [ymin_it, ymax_it] = std::minmax_element(yall.begin(), yall.end());
  const Axis ax = make_axis(xmin, xmax, kLeft, kWidth - kRight);
  const Axis ay = make_axis(*ymin_it, *ymax_it, kHeight - kBottom, kTop);

  std::ostringstream s;
  s << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << num(kWidth) << "\" height=\""
    << num(kHeight) << "\" viewBox=\"0 0 " << num(kWidth) << ' ' << num(kHeight) << "\">\n"
    << "<rect x=\"0\" y=\"0\" width=\"" << num(kWidth) << "\" height=\"" << num(kHeight) << "\" fill=\"white\"/>\n"
    << "<text x=\"" << num(kWidth / 2) << "\" y=\"28\" text-anchor=\"middle\" font-family=\"sans-serif\" "
    << "font-size=\"16\">" << escape(plot.title) << "</text>\n";

  // Frame and axes.
  s << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(kWidth - kLeft - kRight)
    << "\" height=\"" << num(kHeight - kTop - kBottom) << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double t : ticks(ax, xmin, xmax)) {
    const double px = ax.map(t);
    s << "<line x1=\"" << num(px) << "\" y1=\"" << num(kHeight - kBottom) << "\" x2=\"" << num(px) << "\" y2=\""
      << num(kHeight - kBottom + 6) << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << num(px) << "\" y=\"" << num(kHeight - kBottom + 20)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(std::pow(10.0, t))
      << "</text>\n";
  }
  for (double t : ticks(ay, *ymin_it, *ymax_it)) {
    const double py = ay.map(t);
    s << "<line x1=\"" << num(kLeft - 6) << "\" y1=\"" << num(py) << "\" x2=\"" << num(kLeft) << "\" y2=\"" << num(py)
      << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << num(kLeft - 9) << "\" y=\"" << num(py + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick_label(std::pow(10.0, t))
      << "</text>\n";
  }
  s << "<text x=\"" << num((kLeft + kWidth - kRight) / 2) << "\" y=\"" << num(kHeight - 15)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << escape(plot.x_label)
    << "</text>\n"
    << "<text x=\"20\" y=\"" << num((kTop + kHeight - kBottom) / 2) << "\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 20 " << num((kTop + kHeight - kBottom) / 2)
    << ")\">" << escape(plot.y_label) << "</text>\n";

  auto polyline = [&](double slope, double intercept, const char* colour, const char* dash) {
    s << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\"" << dash << " points=\""
      << num(ax.map(xmin)) << ',' << num(ay.map(line(slope, intercept, xmin))) << ' ' << num(ax.map(xmax)) << ','
      << num(ay.map(line(slope, intercept, xmax))) << "\"/>\n";
  };
  polyline(plot.fitted_slope, plot.fitted_intercept, "#1f77b4", "");
  polyline(plot.reference_slope, plot.reference_intercept, "#d62728", " stroke-dasharray=\"6 4\"");
  for (std::size_t i = 0; i < lx.size(); ++i)
    s << "<circle cx=\"" << num(ax.map(lx[i])) << "\" cy=\"" << num(ay.map(ly[i]))
      << "\" r=\"4\" fill=\"black\"/>\n";

  // Legend.
  const double lx0 = kLeft + 12, ly0 = kTop + 16;
  s << "<rect x=\"" << num(lx0 - 6) << "\" y=\"" << num(ly0 - 12) << "\" width=\"220\" height=\"62\" fill=\"white\" "
    << "stroke=\"#888888\"/>\n"
    << "<circle cx=\"" << num(lx0 + 12) << "\" cy=\"" << num(ly0) << "\" r=\"4\" fill=\"black\"/>\n"
    << "<text x=\"" << num(lx0 + 32) << "\" y=\"" << num(ly0 + 4)
    << "\" font-family=\"sans-serif\" font-size=\"12\">median error</text>\n"
    << "<line x1=\"" << num(lx0) << "\" y1=\"" << num(ly0 + 18) << "\" x2=\"" << num(lx0 + 24) << "\" y2=\""
    << num(ly0 + 18) << "\" stroke=\"#1f77b4\" stroke-width=\"2\"/>\n"
    << "<text x=\"" << num(lx0 + 32) << "\" y=\"" << num(ly0 + 22)
    << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(plot.fitted_label) << "</text>\n"
    << "<line x1=\"" << num(lx0) << "\" y1=\"" << num(ly0 + 36) << "\" x2=\"" << num(lx0 + 24) << "\" y2=\""
    << num(ly0 + 36) << "\" stroke=\"#d62728\" stroke-width=\"2\" stroke-dasharray=\"6 4\"/>\n"
    << "<text x=\"" << num(lx0 + 32) << "\" y=\"" << num(ly0 + 40)
    << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape(plot.reference_label) << "</text>\n"
    << "</svg>\n";
  return s.str();
}

}  // namespace regnewt::experiment
