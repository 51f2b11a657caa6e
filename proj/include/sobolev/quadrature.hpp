#pragma once

#include <functional>

namespace sobolev {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool reached_tolerance = true;
};

// Adaptive Simpson with absolute tolerance and a hard cap on integrand calls.
QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                  int max_evaluations = 100000);

}  // namespace sobolev
