#pragma once

#include <vector>

#include "sobolev/core.hpp"

namespace sobolev {

enum class SeedProfile { torsion_like, w1_profile, custom };

struct SolveOptions {
  int max_iterations = 200000;
  double tolerance_rel = 1e-10;       // relative decrease of the objective per step
  double gradient_tolerance = 1e-8;   // metric-dual gradient norm, relative to sqrt(energy)
  double initial_step = 1.0;
  double backtrack_factor = 0.5;
  double armijo_constant = 1e-4;
  // w1_profile on a grid domain falls back to torsion_like.
  SeedProfile seed_profile = SeedProfile::w1_profile;
  std::vector<double> custom_seed;  // interior nodal values, used with SeedProfile::custom
  int threads = 1;

  void validate() const;
};

struct SolveResult {
  double q = 0.0;
  double lambda_hat = 0.0;
  DiscreteField extremal;  // positive, ||.||_q = 1
  int iterations = 0;
  bool converged = false;
  double final_gradient_norm = 0.0;
  int mesh_size = 0;
  bool concentration_regime = false;  // q > p* - 0.1: no convergence-to-lambda_q claim
  std::vector<double> trace;          // objective after each accepted step
};

struct TorsionResult {
  DiscreteField torsion;
  double functional_value = 0.0;  // (1/p) int |grad u|^p - int u
  double l1_norm = 0.0;
  double lambda1_hat = 0.0;  // ||phi||_1^{1-p}
  int iterations = 0;
  bool converged = false;
  double final_gradient_norm = 0.0;
  int mesh_size = 0;
};

struct RefinementResult {
  std::vector<int> mesh_sizes;
  std::vector<double> lambda_hat;
  std::vector<bool> converged;
  double richardson_limit = 0.0;
  double observed_order = 0.0;
};

// Nodal gradient of u -> R_q(u): p ||u||_q^{-p} (A_p(u) - R_q(u) ||u||_q^{p-q} B_q(u)),
// with A_p = grad (1/p) int |grad u|^p and B_q = grad (1/q) int |u|^q.
DiscreteField energy_gradient(const DiscreteField& u, const QExponent& q, const Parameters& params);

// Norm of the weak residual A_p(u) - lambda B_q(u) in the dual of the p-weighted
// stiffness metric at u, divided by sqrt of the energy. Used as the stopping test.
double weak_residual_norm(const DiscreteField& u, double lambda, const QExponent& q, const Parameters& params);

SolveResult minimize_rayleigh(const Domain& domain, const QExponent& q, const Parameters& params,
                              const SolveOptions& opts = {});

TorsionResult solve_torsion(const Domain& domain, const Parameters& params, const SolveOptions& opts = {});

// Solves on `levels` nested refinements of `domain` and extrapolates.
RefinementResult refine_and_extrapolate(const Domain& domain, const QExponent& q, const Parameters& params,
                                        const SolveOptions& opts, int levels);

}  // namespace sobolev
