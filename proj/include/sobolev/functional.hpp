#pragma once

#include <vector>

#include "sobolev/core.hpp"

namespace sobolev {

// A discrete measure on Omega: values at quadrature points with their weights.
// `volume` is |Omega|; weights may sum to less than |Omega| when the remaining
// mass carries the value zero (boundary-adjacent lumped nodes).
struct WeightedSamples {
  std::vector<double> values;
  std::vector<double> weights;
  double volume = 0.0;
};

WeightedSamples sample(const DiscreteField& u);

struct IdentityCheck {
  double s1 = 0.0;
  double s2 = 0.0;
  double lhs = 0.0;  // |Omega|^{p/s1} R_{s1}(u)
  double rhs = 0.0;  // |Omega|^{p/s2} R_{s2}(u) exp(p int_{s1}^{s2} K(t,u)/t^2 dt)
  double entropy_integral = 0.0;
  double quadrature_error_estimate = 0.0;
  double relative_residual = 0.0;
};

struct ContinuityBracket {
  double q = 0.0;
  double s = 0.0;
  double lower = 0.0;  // |Omega|^{p/q} lambda_q_hat
  double upper = 0.0;  // |Omega|^{p/q} R_q(u) (q/s)^{p M_q(u)}
  double m_q = 0.0;    // ln(2 |Omega|^{1/q} ||u||_inf / ||u||_q)
};

double ls_norm(const WeightedSamples& u, double s);
double ls_norm(const DiscreteField& u, double s);
double sup_norm(const DiscreteField& u);
double dirichlet_energy(const DiscreteField& u, const Parameters& params);
double rayleigh(const DiscreteField& u, const QExponent& q, const Parameters& params);

// K(t,u) = int |u|^t ln|u|^t / ||u||_t^t + ln(|Omega| ||u||_t^{-t}); nonnegative by Jensen.
double entropy_K(const WeightedSamples& u, double t);
double entropy_K(const DiscreteField& u, double t);

// Checks |Omega|^{p/s1} R_{s1} = |Omega|^{p/s2} R_{s2} exp(p int K/t^2). The
// sample overload takes the Dirichlet energy separately since it cancels.
IdentityCheck identity_check(const DiscreteField& u, double s1, double s2, const Parameters& params);
IdentityCheck identity_check(const WeightedSamples& u, double energy, double s1, double s2,
                             const Parameters& params);

// Left-continuity bracket |Omega|^{p/q} lambda_q <= |Omega|^{p/s} lambda_s <= upper.
// Throws OutOfRegime unless |Omega|^{-1/s}||u||_s >= |Omega|^{-1/q}||u||_q / 2.
ContinuityBracket continuity_bracket(const DiscreteField& u, const QExponent& q, double s, double lambda_q_hat,
                                     const Parameters& params);

}  // namespace sobolev
