#include "sobolev/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "sobolev/error.hpp"

namespace sobolev::svg {

namespace {

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

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  if (std::abs(v) < 1e-12) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::vector<double> nice_ticks(double lo, double hi, int target) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw InvalidArgument("nice_ticks: non-finite range");
  if (hi < lo) std::swap(lo, hi);
  if (hi == lo) {
    const double pad = lo == 0.0 ? 1.0 : std::abs(lo) * 0.1;
    lo -= pad;
    hi += pad;
  }
  const double raw = (hi - lo) / std::max(1, target);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::floor(lo / step) * step; t <= hi + 1e-9 * step; t += step) ticks.push_back(t);
  if (ticks.back() < hi) ticks.push_back(ticks.back() + step);
  return ticks;
}

std::string render(const Plot& plot) {
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
  double y_lo = x_lo, y_hi = -x_lo;
  for (const auto& s : plot.series) {
    if (s.x.size() != s.y.size()) throw InvalidArgument("svg::render: series '" + s.label + "' has mismatched lengths");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      x_lo = std::min(x_lo, s.x[i]);
      x_hi = std::max(x_hi, s.x[i]);
      y_lo = std::min(y_lo, s.y[i]);
      y_hi = std::max(y_hi, s.y[i]);
    }
  }
  if (!std::isfinite(x_lo)) throw InvalidArgument("svg::render: no finite data");

  const auto xt = nice_ticks(x_lo, x_hi);
  const auto yt = nice_ticks(y_lo, y_hi);
  const double x0 = xt.front(), x1 = xt.back(), y0 = yt.front(), y1 = yt.back();
  const double left = 70, right = 20, top = 40, bottom = 55;
  const double w = plot.width - left - right;
  const double h = plot.height - top - bottom;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * w; };
  auto py = [&](double y) { return top + h - (y - y0) / (y1 - y0) * h; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << plot.width << "\" height=\"" << plot.height
      << "\" viewBox=\"0 0 " << plot.width << ' ' << plot.height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  if (!plot.comment.empty()) out << "<!-- " << escape(plot.comment) << " -->\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << num(plot.width / 2.0) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
      << escape(plot.title) << "</text>\n";

  out << "<g stroke=\"#ddd\" stroke-width=\"1\">\n";
  for (double t : xt) out << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(top) << "\" x2=\"" << num(px(t)) << "\" y2=\"" << num(top + h) << "\"/>\n";
  for (double t : yt) out << "<line x1=\"" << num(left) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left + w) << "\" y2=\"" << num(py(t)) << "\"/>\n";
  out << "</g>\n";

  out << "<g stroke=\"black\" stroke-width=\"1\">\n";
  out << "<line x1=\"" << num(left) << "\" y1=\"" << num(top + h) << "\" x2=\"" << num(left + w) << "\" y2=\"" << num(top + h) << "\"/>\n";
  out << "<line x1=\"" << num(left) << "\" y1=\"" << num(top) << "\" x2=\"" << num(left) << "\" y2=\"" << num(top + h) << "\"/>\n";
  for (double t : xt) out << "<line x1=\"" << num(px(t)) << "\" y1=\"" << num(top + h) << "\" x2=\"" << num(px(t)) << "\" y2=\"" << num(top + h + 5) << "\"/>\n";
  for (double t : yt) out << "<line x1=\"" << num(left - 5) << "\" y1=\"" << num(py(t)) << "\" x2=\"" << num(left) << "\" y2=\"" << num(py(t)) << "\"/>\n";
  out << "</g>\n";

  for (double t : xt) {
    out << "<text x=\"" << num(px(t)) << "\" y=\"" << num(top + h + 18) << "\" text-anchor=\"middle\">"
        << tick_label(t) << "</text>\n";
  }
  for (double t : yt) {
    out << "<text x=\"" << num(left - 8) << "\" y=\"" << num(py(t) + 4) << "\" text-anchor=\"end\">"
        << tick_label(t) << "</text>\n";
  }
  out << "<text x=\"" << num(left + w / 2) << "\" y=\"" << num(plot.height - 12.0)
      << "\" text-anchor=\"middle\">" << escape(plot.x_label) << "</text>\n";
  out << "<text transform=\"translate(16 " << num(top + h / 2) << ") rotate(-90)\" text-anchor=\"middle\">"
      << escape(plot.y_label) << "</text>\n";

  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    out << "<polyline fill=\"none\" stroke=\"" << escape(s.color) << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      out << (first ? "" : " ") << num(px(s.x[i])) << ',' << num(py(s.y[i]));
      first = false;
    }
    out << "\"/>\n";
    const double ly = top + 14 + 16 * static_cast<double>(k);
    out << "<line x1=\"" << num(left + w - 150) << "\" y1=\"" << num(ly) << "\" x2=\"" << num(left + w - 130)
        << "\" y2=\"" << num(ly) << "\" stroke=\"" << escape(s.color) << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << num(left + w - 125) << "\" y=\"" << num(ly + 4) << "\">" << escape(s.label) << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace sobolev::svg
