#include "sobolev/quadrature.hpp"

#include <cmath>

namespace sobolev {

namespace {

struct Simpson {
  const std::function<double(double)>& f;
  int max_evaluations;
  int evaluations = 0;
  double error = 0.0;
  bool ok = true;

  double eval(double x) {
    ++evaluations;
    return f(x);
  }

  double recurse(double a, double fa, double m, double fm, double b, double fb, double whole, double tol,
                 int depth) {
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    if (evaluations + 2 > max_evaluations) {
      ok = false;
      return whole;
    }
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
      error += std::abs(delta) / 15.0;
      if (depth <= 0 && std::abs(delta) > 15.0 * tol) ok = false;
      return left + right + delta / 15.0;
    }
    return recurse(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1) +
           recurse(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1);
  }
};

}  // namespace

QuadratureResult adaptive_simpson(const std::function<double(double)>& f, double a, double b, double abs_tol,
                                  int max_evaluations) {
  QuadratureResult result;
  if (a == b) return result;
  Simpson s{f, max_evaluations};
  const double fa = s.eval(a);
  const double fb = s.eval(b);
  const double m = 0.5 * (a + b);
  const double fm = s.eval(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  result.value = s.recurse(a, fa, m, fm, b, fb, whole, abs_tol, 50);
  result.error_estimate = s.error;
  result.evaluations = s.evaluations;
  result.reached_tolerance = s.ok;
  return result;
}

}  // namespace sobolev
