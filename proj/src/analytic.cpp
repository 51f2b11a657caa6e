#include "sobolev/analytic.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "sobolev/error.hpp"
#include "sobolev/mesh.hpp"

namespace sobolev::analytic {

double gamma_fn(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "gamma_fn: argument must be positive and finite (got " << x << ")";
    throw InvalidArgument(msg.str());
  }
  return std::tgamma(x);
}

double sobolev_constant(const Parameters& params) {
  const double p = params.p();
  const double n = params.n_dim();
  const double ratio = gamma_fn(n / p) * gamma_fn(1.0 + n - n / p) / (gamma_fn(1.0 + n / 2.0) * gamma_fn(n));
  return std::sqrt(std::numbers::pi) * std::pow(n, 1.0 / p) * std::pow((n - p) / (p - 1.0), (p - 1.0) / p) *
         std::pow(ratio, 1.0 / n);
}

double sobolev_constant_pth_power(const Parameters& params) {
  return std::pow(sobolev_constant(params), params.p());
}

double sobolev_upper_bound(const Parameters& params) {
  const double p = params.p();
  const double n = params.n_dim();
  const double p_star = params.critical_exponent();
  return std::sqrt(std::numbers::pi) * std::pow(n, 1.0 / p) * std::pow((n - p) / (p - 1.0), (p - 1.0) / p) *
         std::pow(p_star - 1.0, (p - 1.0) / p) / std::pow(gamma_fn(1.0 + n / 2.0), 1.0 / n);
}

namespace {

void check_radius(double r, double radius, const char* what) {
  if (!(radius > 0.0)) throw InvalidArgument(std::string(what) + ": radius must be positive");
  if (!(r >= 0.0) || r > radius) {
    std::ostringstream msg;
    msg << what << ": |x|=" << r << " outside [0, " << radius << "]";
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

double torsion_ball(double r, const Parameters& params, double radius) {
  check_radius(r, radius, "torsion_ball");
  const double p = params.p();
  const double n = params.n_dim();
  const double e = p / (p - 1.0);
  return (p - 1.0) / p * std::pow(n, -1.0 / (p - 1.0)) * (std::pow(radius, e) - std::pow(r, e));
}

double lambda1_ball(const Parameters& params, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("lambda1_ball: radius must be positive");
  const double p = params.p();
  const double n = params.n_dim();
  const double omega = unit_ball_volume(params.n_dim());
  const double base = (p + n * (p - 1.0)) / (omega * (p - 1.0));
  return std::pow(base, p - 1.0) * n / std::pow(radius, (params.critical_exponent() - 1.0) * (n - p));
}

double w1_ball(double x_radius, const Parameters& params, double radius) {
  check_radius(x_radius, radius, "w1_ball");
  const double p = params.p();
  const double n = params.n_dim();
  const double omega = unit_ball_volume(params.n_dim());
  return (p + n * (p - 1.0)) / (p * omega * std::pow(radius, n)) *
         (1.0 - std::pow(x_radius / radius, p / (p - 1.0)));
}

double lambda_q_ball_upper_bound(const QExponent& q, const Parameters& params, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("lambda_q_ball_upper_bound: radius must be positive");
  const double p_star = params.critical_exponent();
  if (q.value() >= p_star) {
    throw InvalidArgument("lambda_q_ball_upper_bound: requires q < p* (the bound is R-independent at q = p*)");
  }
  const double p = params.p();
  const double n = params.n_dim();
  const double omega = unit_ball_volume(params.n_dim());
  const double base = (p + n * (p - 1.0)) / (omega * (p - 1.0));
  return std::pow(base, p - 1.0) * n * std::pow(omega, p * (1.0 - 1.0 / q.value())) /
         std::pow(radius, (n - p) * (p_star / q.value() - 1.0));
}

TalentiProfile::TalentiProfile(double a_, double b_, const Parameters& params_, std::array<double, 3> center_)
    : a(a_), b(b_), center(center_), params(params_) {
  if (a == 0.0 || !std::isfinite(a)) throw InvalidArgument("TalentiProfile: amplitude must be nonzero");
  if (!(b > 0.0) || !std::isfinite(b)) throw InvalidArgument("TalentiProfile: b must be positive");
}

double talenti_value(const TalentiProfile& profile, double x_radius) {
  if (!(x_radius >= 0.0)) throw InvalidArgument("talenti_value: radius must be >= 0");
  const double p = profile.params.p();
  const double n = profile.params.n_dim();
  return profile.a * std::pow(1.0 + profile.b * std::pow(x_radius, p / (p - 1.0)), -(n - p) / p);
}

double talenti_derivative(const TalentiProfile& profile, double x_radius) {
  if (!(x_radius >= 0.0)) throw InvalidArgument("talenti_derivative: radius must be >= 0");
  const double p = profile.params.p();
  const double n = profile.params.n_dim();
  const double e = p / (p - 1.0);
  if (x_radius == 0.0) return 0.0;
  const double base = 1.0 + profile.b * std::pow(x_radius, e);
  return profile.a * (-(n - p) / p) * std::pow(base, -(n - p) / p - 1.0) * profile.b * e *
         std::pow(x_radius, e - 1.0);
}

double truncated_talenti_rayleigh(const Parameters& params, double radius, double b) {
  if (!(radius > 0.0)) throw InvalidArgument("truncated_talenti_rayleigh: radius must be positive");
  const TalentiProfile profile(1.0, b, params);
  const double p = params.p();
  const int n = params.n_dim();
  const double p_star = params.critical_exponent();
  const double edge = talenti_value(profile, radius);
  const double scale = std::pow(b, -(p - 1.0) / p);  // concentration radius

  // Geometric breakpoints around the concentration radius.
  std::vector<double> breaks{0.0};
  double r = std::min(scale * 1e-6, radius * 1e-6);
  while (r < radius) {
    breaks.push_back(r);
    r *= 1.25;
  }
  breaks.push_back(radius);

  const GaussRule rule = gauss_legendre_unit(12);
  const double surface = n * unit_ball_volume(n);
  double energy = 0.0;
  double mass = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = breaks[i];
    const double h = breaks[i + 1] - lo;
    for (std::size_t g = 0; g < rule.nodes.size(); ++g) {
      const double x = lo + rule.nodes[g] * h;
      const double w = surface * std::pow(x, n - 1) * h * rule.weights[g];
      energy += w * std::pow(std::abs(talenti_derivative(profile, x)), p);
      mass += w * std::pow(talenti_value(profile, x) - edge, p_star);
    }
  }
  return energy / std::pow(mass, p / p_star);
}

}  // namespace sobolev::analytic
