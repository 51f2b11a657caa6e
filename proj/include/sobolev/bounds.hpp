#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "sobolev/core.hpp"
#include "sobolev/sweep.hpp"

namespace sobolev {

// C_q = (p/(p+N(p-1)))^{N+1} (S^p/lambda_q)^{N/p}
double c_q(const QExponent& q, double lambda_q, const Parameters& params);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool pass = false;
};

struct LevelSetCheck : InequalityCheck {
  double q = 0.0;
  double sigma = 0.0;
  double c_q = 0.0;
  double sup_norm = 0.0;
};

// 2^{-(N(p-1)+sigma p)/p} C_q ||w||_inf^{(N(p-q)+sigma p)/p} <= ||w||_sigma^sigma.
// w must be nonnegative with ||w||_q = 1 (relative tolerance 1e-9).
LevelSetCheck level_set_bound_check(const DiscreteField& w, const QExponent& q, double sigma, double lambda_q,
                                    const Parameters& params);

struct ConstantsLedger {
  double epsilon = 0.0;
  double volume = 0.0;
  std::vector<std::pair<double, double>> c_q_samples;  // (q, C_q) from sampled lambda_hat
  double a_tilde = 0.0;
  double b_tilde_eps = 0.0;
  double c_eps = 0.0;  // max(a_tilde, b_tilde_eps)
  double a_const = 0.0;
  double b_eps = 0.0;
  double d_eps = 0.0;  // max(a_const, b_eps)
  // H(p*-eps) overflows double for realistic D_eps; log_l_eps is always finite
  // and l_eps is +inf when exp(log_l_eps) is not representable.
  double l_eps = 0.0;
  double log_l_eps = 0.0;
  double lambda1_hat = 0.0;
  double log_lipschitz_bound = 0.0;  // log(|Omega|^p lambda1_hat L_eps)
  bool c_q_increasing = false;       // reported, not asserted
};

// Fills every constant from the sweep samples. Needs q_0 = 1, at least one
// sample in [1, p] and one in [p, p* - eps], all converged.
ConstantsLedger build_ledger(const SweepResult& sweep, double epsilon);

// D_eps = max(A, B_eps) over the sampled q values.
double d_epsilon(double epsilon, const SweepResult& sweep);

struct LinfCheck {
  double q = 0.0;
  double lower = 0.0;  // |Omega|^{-1/q}
  double sup_norm = 0.0;
  double upper = 0.0;  // C_eps
  bool lower_pass = false;
  bool upper_pass = false;
};

// |Omega|^{-1/q} <= ||w||_inf <= C_eps, q <= p* - eps.
LinfCheck linf_bounds_check(const DiscreteField& w, const QExponent& q, const ConstantsLedger& ledger,
                            const Parameters& params);

enum class HBranch { automatic, series, closed_form };

// H(xi) = (xi^a - 1)/(xi - 1), H(1) = a. The series branch is used for
// |xi - 1| < 1e-6 in automatic mode.
double lipschitz_h(double xi, double a, HBranch branch = HBranch::automatic);
double log_lipschitz_h(double xi, double a);

struct LipschitzConstant {
  double l_eps = 0.0;  // +inf on overflow
  double log_l_eps = 0.0;
};

// L_eps = max_{1 <= xi <= p*-eps} H(xi) with a = p D_eps.
LipschitzConstant lipschitz_constant(double epsilon, double d_eps, const Parameters& params);

struct VerificationItem {
  std::string name;
  std::string anchor;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::string note;
};

struct VerifyOptions {
  std::uint64_t seed = 20240611;
  int identity_pairs = 2;       // random (s1, s2) per extremal
  double solver_tolerance = 1e-10;
};

struct VerificationReport {
  double epsilon = 0.0;
  std::vector<VerificationItem> items;
  bool has_ledger = false;
  ConstantsLedger ledger;
  bool vacuous = false;
  bool pass = false;

  std::size_t failures() const;
  const VerificationItem* first_failure() const;
};

// Runs every check over the sweep and its extremals. Upstream errors are
// recorded as failed items.
VerificationReport verify_all(const SweepResult& sweep, double epsilon, const VerifyOptions& opts = {});

}  // namespace sobolev
