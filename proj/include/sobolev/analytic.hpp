#pragma once

#include <array>

#include "sobolev/core.hpp"

// Closed-form constants and profiles on balls.
namespace sobolev::analytic {

// Gamma function for x > 0.
double gamma_fn(double x);

// Sharp constant S_{p,N} in S ||u||_{p*} <= ||grad u||_p on R^N.
double sobolev_constant(const Parameters& params);
// S_{p,N}^p, which equals lambda_{p*} on every domain.
double sobolev_constant_pth_power(const Parameters& params);
// Upper bound for S_{p,N} obtained from the ball estimate at q = p*.
double sobolev_upper_bound(const Parameters& params);

// Torsion function of B_R: solution of -Delta_p u = 1, u = 0 on the sphere.
double torsion_ball(double r, const Parameters& params, double radius);
// lambda_1(B_R) = ||phi_p||_1^{1-p}.
double lambda1_ball(const Parameters& params, double radius);
// L^1-normalized extremal for q = 1 on B_R.
double w1_ball(double x_radius, const Parameters& params, double radius);
// Upper bound lambda_q(B_R) <= lambda_1(B_R) |B_R|^{p(1-1/q)}, valid for 1 <= q < p*.
double lambda_q_ball_upper_bound(const QExponent& q, const Parameters& params, double radius);

struct TalentiProfile {
  double a = 1.0;
  double b = 1.0;
  std::array<double, 3> center{0.0, 0.0, 0.0};
  Parameters params;

  TalentiProfile(double a_, double b_, const Parameters& params_, std::array<double, 3> center_ = {});
};

// a (1 + b r^{p/(p-1)})^{-(N-p)/p}
double talenti_value(const TalentiProfile& profile, double x_radius);
double talenti_derivative(const TalentiProfile& profile, double x_radius);

// R_{p*} of the Talenti profile shifted to vanish at |x| = radius, restricted to
// B_radius. Evaluated by graded composite Gauss quadrature of the exact profile.
double truncated_talenti_rayleigh(const Parameters& params, double radius, double b);

}  // namespace sobolev::analytic
