#pragma once

#include <string>
#include <vector>

namespace sobolev::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
};

struct Plot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  int width = 640;
  int height = 420;
  std::string comment;  // emitted as an XML comment
};

// Round tick positions covering [lo, hi] (about `target` of them).
std::vector<double> nice_ticks(double lo, double hi, int target = 6);

// Static SVG: axes, tick labels, one polyline per series and a legend.
std::string render(const Plot& plot);

}  // namespace sobolev::svg
