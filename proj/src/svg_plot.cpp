#include "dppbo/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dppbo {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 150;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
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

}  // namespace

std::string render_svg(const std::vector<AggregateStats>& series, const PlotOptions& opt) {
  if (opt.log_y && !(opt.log_floor > 0.0)) throw std::invalid_argument("log floor must be positive");
  const auto mean_of = [&](const AggregateRow& r) {
    return opt.metric == PlotMetric::kSimple ? r.mean_simple : r.mean_cum;
  };
  const auto se_of = [&](const AggregateRow& r) {
    return opt.metric == PlotMetric::kSimple ? r.se_simple : r.se_cum;
  };
  const auto ymap = [&](double v) { return opt.log_y ? std::log10(std::max(v, opt.log_floor)) : v; };

  double tmin = std::numeric_limits<double>::infinity(), tmax = -tmin;
  double ymin = tmin, ymax = -tmin;
  for (const AggregateStats& s : series) {
    for (const AggregateRow& r : s.rows) {
      tmin = std::min(tmin, double(r.t));
      tmax = std::max(tmax, double(r.t));
      ymin = std::min(ymin, ymap(mean_of(r) - se_of(r)));
      ymax = std::max(ymax, ymap(mean_of(r) + se_of(r)));
    }
  }
  if (!std::isfinite(tmin)) {
    tmin = 0;
    tmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (tmax == tmin) tmax = tmin + 1;
  if (ymax == ymin) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double pw = opt.width - kMarginLeft - kMarginRight;
  const double ph = opt.height - kMarginTop - kMarginBottom;
  const auto px = [&](double t) { return kMarginLeft + (t - tmin) / (tmax - tmin) * pw; };
  const auto py = [&](double y) { return kMarginTop + (ymax - ymap(y)) / (ymax - ymin) * ph; };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\""
    << opt.height << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\">\n";
  o << "<rect x=\"0\" y=\"0\" width=\"" << opt.width << "\" height=\"" << opt.height
    << "\" fill=\"white\"/>\n";
  if (!opt.title.empty()) {
    o << "<text x=\"" << num(kMarginLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"14\">" << escape(opt.title) << "</text>\n";
  }

  // axes
  const double x0 = kMarginLeft, y0 = kMarginTop + ph;
  o << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0 + pw) << "\" y2=\""
    << num(y0) << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << num(x0) << "\" y1=\"" << num(kMarginTop) << "\" x2=\"" << num(x0)
    << "\" y2=\"" << num(y0) << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double t = tmin + (tmax - tmin) * k / 4.0;
    const double u = ymin + (ymax - ymin) * k / 4.0;
    const double label = opt.log_y ? std::pow(10.0, u) : u;
    const double ty = kMarginTop + (ymax - u) / (ymax - ymin) * ph;
    o << "<text x=\"" << num(px(t)) << "\" y=\"" << num(y0 + 18)
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << tick(t)
      << "</text>\n";
    o << "<text x=\"" << num(x0 - 6) << "\" y=\"" << num(ty + 4)
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << tick(label)
      << "</text>\n";
  }
  o << "<text x=\"" << num(x0 + pw / 2) << "\" y=\"" << num(y0 + 40)
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">round t</text>\n";
  o << "<text x=\"16\" y=\"" << num(kMarginTop + ph / 2) << "\" text-anchor=\"middle\" "
    << "font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 16 "
    << num(kMarginTop + ph / 2) << ")\">"
    << (opt.metric == PlotMetric::kSimple ? "simple regret" : "cumulative regret") << "</text>\n";

  for (std::size_t i = 0; i < series.size(); ++i) {
    const AggregateStats& s = series[i];
    const char* color = kPalette[i % std::size(kPalette)];
    std::string band, line;
    for (const AggregateRow& r : s.rows) {
      band += num(px(r.t)) + ',' + num(py(mean_of(r) + se_of(r))) + ' ';
    }
    for (auto it = s.rows.rbegin(); it != s.rows.rend(); ++it) {
      band += num(px(it->t)) + ',' + num(py(mean_of(*it) - se_of(*it))) + ' ';
    }
    for (const AggregateRow& r : s.rows) line += num(px(r.t)) + ',' + num(py(mean_of(r))) + ' ';
    if (!band.empty()) band.pop_back();
    if (!line.empty()) line.pop_back();
    o << "<polyline points=\"" << band << "\" fill=\"" << color
      << "\" fill-opacity=\"0.2\" stroke=\"none\"/>\n";
    o << "<polyline points=\"" << line << "\" fill=\"none\" stroke=\"" << color
      << "\" stroke-width=\"1.5\"/>\n";
    const double ly = kMarginTop + 14 + 18.0 * static_cast<double>(i);
    o << "<rect x=\"" << num(x0 + pw + 12) << "\" y=\"" << num(ly - 9) << "\" width=\"12\" height=\"3\" fill=\""
      << color << "\"/>\n";
    o << "<text x=\"" << num(x0 + pw + 30) << "\" y=\"" << num(ly - 4)
      << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

void emit_plot(const std::string& path, const std::vector<AggregateStats>& series,
               const PlotOptions& options) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << render_svg(series, options);
}

}  // namespace dppbo
