#pragma once

#include <vector>

#include "sobolev/core.hpp"
#include "sobolev/solver.hpp"

namespace sobolev {

struct ExtremalStats {
  double sup_norm = 0.0;
  double l1_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  bool concentration_regime = false;
};

struct SweepResult {
  Parameters params;
  Domain domain;
  double volume = 0.0;
  int mesh_size = 0;
  std::vector<double> q_grid;
  std::vector<double> lambda_hat;
  std::vector<double> scaled_lambda;  // |Omega|^{p/q} lambda_hat
  std::vector<ExtremalStats> stats;
  std::vector<DiscreteField> extremals;

  std::size_t size() const { return q_grid.size(); }
  bool all_converged() const;
};

struct SweepOptions {
  bool warm_start = true;  // seed each solve with the previous extremal
  int threads = 1;         // cold-start sweeps solve different q concurrently
};

// n points from 1 to p* - margin, with gaps shrinking toward p* (roughly
// proportional to p* - q + (p* - 1)/5).
std::vector<double> default_q_grid(const Parameters& params, int points, double margin = 0.05);
std::vector<double> uniform_q_grid(double first, double last, int points);

SweepResult run_sweep(const Domain& domain, const Parameters& params, const std::vector<double>& q_grid,
                      const SolveOptions& opts, const SweepOptions& sweep_opts = {});

struct PairDecrement {
  double q_left = 0.0;
  double q_right = 0.0;
  double left = 0.0;
  double right = 0.0;
  double decrement = 0.0;  // left - right
  double relative = 0.0;   // decrement / left
  bool pass = false;
};

struct MonotonicityReport {
  std::vector<PairDecrement> pairs;
  double relative_tolerance = 0.0;
  bool pass = false;    // no increase beyond the relative tolerance
  bool strict = false;  // every decrement > 0
};

// |Omega|^{p/q} lambda_q strictly decreasing across the grid.
MonotonicityReport check_monotonicity(const SweepResult& sweep, double relative_tolerance = 1e-9);

struct TotalVariation {
  double total_variation = 0.0;
  // sum over pairs of max|f| |dg| + max|g| |df| for lambda = f g with
  // f = |Omega|^{-p/q}, g = |Omega|^{p/q} lambda.
  double decomposition_bound = 0.0;
};
TotalVariation total_variation(const SweepResult& sweep);

struct ScalingReport {
  double q = 0.0;
  double radius1 = 0.0;
  double radius2 = 0.0;
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double exponent = 0.0;           // (N-p)(p*/q - 1)
  double relative_mismatch = 0.0;  // |lambda2 (R2/R1)^exponent - lambda1| / lambda1
  bool converged = false;
};

// Solves on B_{R1} (uniform mesh with `elements` segments) and on its exact
// dilation to B_{R2}, and compares through the dilation law.
ScalingReport scaling_check(const Parameters& params, const QExponent& q, double radius1, double radius2,
                            const SolveOptions& opts, int elements = 512);

struct BallBoundRow {
  double radius = 0.0;
  double lambda_hat = 0.0;
  double bound = 0.0;
  bool pass = false;
};
// lambda_hat_q(B_R) <= lambda_1(B_R) |B_R|^{p(1-1/q)} for each radius.
std::vector<BallBoundRow> ball_bound_check(const Parameters& params, const QExponent& q,
                                           const std::vector<double>& radii, const SolveOptions& opts,
                                           int elements = 512);

struct CriticalAnchorRow {
  double q = 0.0;
  double lambda_hat = 0.0;
  double anchor = 0.0;  // |Omega|^{p/p* - p/q} S^p
  bool pass = false;
};

struct TalentiRow {
  double b = 0.0;
  double rayleigh = 0.0;  // R_{p*} of the truncated profile
  double relative_gap = 0.0;
};

struct PStarLimitReport {
  double sobolev_pth_power = 0.0;
  double scaled_anchor = 0.0;  // |Omega|^{p/p*} S^p
  std::vector<CriticalAnchorRow> anchors;
  std::vector<TalentiRow> talenti;
  bool anchors_pass = false;
  bool scaled_anchor_pass = false;  // every scaled_lambda entry > |Omega|^{p/p*} S^p
  bool talenti_decreasing = false;
  double final_gap = 0.0;
  bool slow_concentration = false;  // final gap above 5%
};

// Requires a radial sweep. `concentration` lists the Talenti parameters b.
PStarLimitReport p_star_limit_report(const SweepResult& sweep, const std::vector<double>& concentration);

struct DerivativeReconstruction {
  std::vector<double> derivative;
  std::vector<double> reconstruction;
  double max_relative_deviation = 0.0;
};

// Finite-difference derivatives of lambda_hat (second order), integrated back
// from q_0 by the trapezoid rule.
DerivativeReconstruction derivative_reconstruction(const SweepResult& sweep);

}  // namespace sobolev
