#include "sobolev/functional.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sobolev/error.hpp"
#include "sobolev/kernels.hpp"
#include "sobolev/quadrature.hpp"

namespace sobolev {

namespace {

constexpr double kEntropyTolerance = 1e-10;
constexpr int kEntropyMaxEvaluations = 100000;

double power_sum(const WeightedSamples& u, double s) {
  double total = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    const double v = std::abs(u.values[k]);
    if (v != 0.0) total += u.weights[k] * std::pow(v, s);
  }
  return total;
}

void check_exponent_range(double s1, double s2, const Parameters& params) {
  const double p_star = params.critical_exponent();
  if (!(s1 >= 1.0) || !(s2 <= p_star) || !(s1 < s2)) {
    std::ostringstream msg;
    msg << "identity_check: need 1 <= s1 < s2 <= p* (got s1=" << s1 << ", s2=" << s2 << ", p*=" << p_star << ")";
    throw InvalidArgument(msg.str());
  }
}

}  // namespace

WeightedSamples sample(const DiscreteField& u) {
  const Mesh& mesh = u.domain().mesh();
  WeightedSamples out;
  out.volume = u.domain().volume();
  out.values.resize(mesh.points.size());
  out.weights.resize(mesh.points.size());
  const auto v = u.values();
  for (std::size_t k = 0; k < mesh.points.size(); ++k) {
    const auto& q = mesh.points[k];
    out.values[k] = (q.a >= 0 ? q.ca * v[q.a] : 0.0) + (q.b >= 0 ? q.cb * v[q.b] : 0.0);
    out.weights[k] = q.weight;
  }
  return out;
}

double ls_norm(const WeightedSamples& u, double s) {
  if (!(s >= 1.0)) throw InvalidArgument("ls_norm: exponent must be >= 1");
  return std::pow(power_sum(u, s), 1.0 / s);
}

double ls_norm(const DiscreteField& u, double s) { return ls_norm(sample(u), s); }

double sup_norm(const DiscreteField& u) { return kernels::serial::sup_abs(u.values()); }

double dirichlet_energy(const DiscreteField& u, const Parameters& params) {
  return kernels::serial::energy(u.domain().mesh(), params.p(), u.values());
}

double rayleigh(const DiscreteField& u, const QExponent& q, const Parameters& params) {
  const double norm = ls_norm(u, q.value());
  if (norm == 0.0) throw DegenerateInput("rayleigh: ||u||_q = 0");
  return dirichlet_energy(u, params) / std::pow(norm, params.p());
}

double entropy_K(const WeightedSamples& u, double t) {
  if (!(t >= 1.0)) throw InvalidArgument("entropy_K: t must be >= 1");
  double power = 0.0;
  double power_log = 0.0;
  for (std::size_t k = 0; k < u.values.size(); ++k) {
    const double v = std::abs(u.values[k]);
    if (v == 0.0) continue;
    const double vt = std::pow(v, t);
    power += u.weights[k] * vt;
    power_log += u.weights[k] * vt * t * std::log(v);
  }
  if (power == 0.0) throw DegenerateInput("entropy_K: field is identically zero");
  return power_log / power + std::log(u.volume / power);
}

double entropy_K(const DiscreteField& u, double t) { return entropy_K(sample(u), t); }

IdentityCheck identity_check(const WeightedSamples& u, double energy, double s1, double s2,
                             const Parameters& params) {
  check_exponent_range(s1, s2, params);
  const double p = params.p();
  const double n1 = ls_norm(u, s1);
  const double n2 = ls_norm(u, s2);
  if (n1 == 0.0 || n2 == 0.0) throw DegenerateInput("identity_check: field is identically zero");

  const auto integral = adaptive_simpson([&](double t) { return entropy_K(u, t) / (t * t); }, s1, s2,
                                         kEntropyTolerance, kEntropyMaxEvaluations);
  IdentityCheck check;
  check.s1 = s1;
  check.s2 = s2;
  check.lhs = std::pow(u.volume, p / s1) * energy / std::pow(n1, p);
  check.rhs = std::pow(u.volume, p / s2) * energy / std::pow(n2, p) * std::exp(p * integral.value);
  check.entropy_integral = integral.value;
  check.quadrature_error_estimate = integral.error_estimate;
  const double scale = std::max(std::abs(check.lhs), std::abs(check.rhs));
  check.relative_residual = scale > 0.0 ? std::abs(check.lhs - check.rhs) / scale : 0.0;
  return check;
}

IdentityCheck identity_check(const DiscreteField& u, double s1, double s2, const Parameters& params) {
  check_exponent_range(s1, s2, params);
  return identity_check(sample(u), dirichlet_energy(u, params), s1, s2, params);
}

ContinuityBracket continuity_bracket(const DiscreteField& u, const QExponent& q, double s, double lambda_q_hat,
                                     const Parameters& params) {
  const double qv = q.value();
  if (!(s >= 1.0) || !(s < qv)) throw InvalidArgument("continuity_bracket: need 1 <= s < q");
  const WeightedSamples samples = sample(u);
  const double volume = samples.volume;
  const double norm_q = ls_norm(samples, qv);
  const double norm_s = ls_norm(samples, s);
  if (norm_q == 0.0) throw DegenerateInput("continuity_bracket: ||u||_q = 0");
  if (std::pow(volume, -1.0 / s) * norm_s < 0.5 * std::pow(volume, -1.0 / qv) * norm_q) {
    std::ostringstream msg;
    msg << "continuity_bracket: s=" << s << " is not close enough to q=" << qv
        << " (|Omega|^{-1/s}||u||_s < |Omega|^{-1/q}||u||_q / 2)";
    throw OutOfRegime(msg.str());
  }
  const double p = params.p();
  const double rq = dirichlet_energy(u, params) / std::pow(norm_q, p);
  ContinuityBracket b;
  b.q = qv;
  b.s = s;
  b.m_q = std::log(2.0 * std::pow(volume, 1.0 / qv) * sup_norm(u) / norm_q);
  b.lower = std::pow(volume, p / qv) * lambda_q_hat;
  b.upper = std::pow(volume, p / qv) * rq * std::pow(qv / s, p * b.m_q);
  return b;
}

}  // namespace sobolev
