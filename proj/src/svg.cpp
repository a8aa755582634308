#include "srvar/svg.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace srvar::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 50.0;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

struct Frame {
  double x_min, x_max, y_min, y_max;

  double px(double x) const {
    const double span = x_max > x_min ? x_max - x_min : 1.0;
    return kMargin + (x - x_min) / span * (kWidth - 2 * kMargin);
  }
  double py(double y) const {
    const double span = y_max > y_min ? y_max - y_min : 1.0;
    return kHeight - kMargin - (y - y_min) / span * (kHeight - 2 * kMargin);
  }
};

Frame frame_for(const std::vector<double>& xs, std::initializer_list<const std::vector<double>*> ys) {
  Frame f{xs.front(), xs.back(), ys.begin()[0]->front(), ys.begin()[0]->front()};
  for (const auto* series : ys) {
    for (double v : *series) {
      f.y_min = std::min(f.y_min, v);
      f.y_max = std::max(f.y_max, v);
    }
  }
  const double pad = 0.05 * (f.y_max - f.y_min > 0 ? f.y_max - f.y_min : 1.0);
  f.y_min -= pad;
  f.y_max += pad;
  return f;
}

std::string points(const Frame& f, const std::vector<double>& xs, const std::vector<double>& ys) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ' ';
    out += num(f.px(xs[i])) + ',' + num(f.py(ys[i]));
  }
  return out;
}

std::string path_data(const Frame& f, const std::vector<double>& xs, const std::vector<double>& ys) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    out += (i ? " L " : "M ") + num(f.px(xs[i])) + ' ' + num(f.py(ys[i]));
  }
  return out;
}

void header(std::ostringstream& out, const std::string& title, const Frame& f, const std::string& x_label) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "  <rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
      << "  <text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">" << escape(title)
      << "</text>\n"
      << "  <rect x=\"" << kMargin << "\" y=\"" << kMargin << "\" width=\"" << kWidth - 2 * kMargin << "\" height=\""
      << kHeight - 2 * kMargin << "\" fill=\"none\" stroke=\"#444\"/>\n"
      << "  <text x=\"" << kMargin - 4 << "\" y=\"" << num(f.py(f.y_max)) << "\" text-anchor=\"end\" font-size=\"10\">"
      << num(f.y_max) << "</text>\n"
      << "  <text x=\"" << kMargin - 4 << "\" y=\"" << num(f.py(f.y_min)) << "\" text-anchor=\"end\" font-size=\"10\">"
      << num(f.y_min) << "</text>\n"
      << "  <text x=\"" << kMargin << "\" y=\"" << kHeight - kMargin + 14 << "\" font-size=\"10\">" << num(f.x_min)
      << "</text>\n"
      << "  <text x=\"" << kWidth - kMargin << "\" y=\"" << kHeight - kMargin + 14
      << "\" text-anchor=\"end\" font-size=\"10\">" << num(f.x_max) << "</text>\n"
      << "  <text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 12 << "\" text-anchor=\"middle\" font-size=\"12\">"
      << escape(x_label) << "</text>\n";
}

}  // namespace

std::string render_fan_chart(const FanChart& chart) {
  const Frame f = frame_for(chart.x, {&chart.lower, &chart.median, &chart.upper});
  std::ostringstream out;
  header(out, chart.title, f, chart.x_label);

  std::vector<double> band_x = chart.x;
  std::vector<double> band_y = chart.upper;
  for (std::size_t i = chart.x.size(); i-- > 0;) {
    band_x.push_back(chart.x[i]);
    band_y.push_back(chart.lower[i]);
  }
  out << "  <polygon points=\"" << points(f, band_x, band_y) << "\" fill=\"#9ecae1\" fill-opacity=\"0.6\"/>\n"
      << "  <path d=\"" << path_data(f, chart.x, chart.lower) << "\" fill=\"none\" stroke=\"#3182bd\"/>\n"
      << "  <path d=\"" << path_data(f, chart.x, chart.upper) << "\" fill=\"none\" stroke=\"#3182bd\"/>\n"
      << "  <polyline points=\"" << points(f, chart.x, chart.median)
      << "\" fill=\"none\" stroke=\"#08519c\" stroke-width=\"2\"/>\n"
      << "</svg>\n";
  return out.str();
}

std::string render_shadow_plot(const ShadowPlot& plot) {
  std::vector<double> xs(plot.observed.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = static_cast<double>(i);
  const std::vector<double> bound_line(xs.size(), plot.bound);
  const Frame f = frame_for(xs, {&plot.observed, &plot.shadow, &bound_line});
  std::ostringstream out;
  header(out, plot.title, f, "period");
  out << "  <line x1=\"" << num(f.px(xs.front())) << "\" y1=\"" << num(f.py(plot.bound)) << "\" x2=\""
      << num(f.px(xs.back())) << "\" y2=\"" << num(f.py(plot.bound)) << "\" stroke=\"#bbb\"/>\n"
      << "  <polyline points=\"" << points(f, xs, plot.observed)
      << "\" fill=\"none\" stroke=\"#555\" stroke-dasharray=\"5,4\"/>\n"
      << "  <polyline points=\"" << points(f, xs, plot.shadow) << "\" fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2\"/>\n"
      << "</svg>\n";
  return out.str();
}

}  // namespace srvar::svg
