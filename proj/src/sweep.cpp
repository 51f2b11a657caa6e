#include "sobolev/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include <omp.h>

#include "sobolev/analytic.hpp"
#include "sobolev/error.hpp"
#include "sobolev/functional.hpp"

namespace sobolev {

bool SweepResult::all_converged() const {
  return std::all_of(stats.begin(), stats.end(), [](const ExtremalStats& s) { return s.converged; });
}

std::vector<double> default_q_grid(const Parameters& params, int points, double margin) {
  const double p_star = params.critical_exponent();
  if (points < 1) throw InvalidArgument("default_q_grid: need at least one point");
  if (!(margin >= 0.0) || margin >= p_star - 1.0) throw InvalidArgument("default_q_grid: margin out of range");
  if (points == 1) return {1.0};
  const double span = p_star - 1.0;
  const double offset = 0.2 * span;
  const double ratio = (margin + offset) / (span + offset);
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    const double t = static_cast<double>(i) / (points - 1);
    grid[i] = p_star - ((span + offset) * std::pow(ratio, t) - offset);
  }
  grid.front() = 1.0;
  grid.back() = p_star - margin;
  return grid;
}

std::vector<double> uniform_q_grid(double first, double last, int points) {
  if (points < 1) throw InvalidArgument("uniform_q_grid: need at least one point");
  if (points == 1) return {first};
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = first + (last - first) * static_cast<double>(i) / (points - 1);
  grid.back() = last;
  return grid;
}

namespace {

void validate_grid(const std::vector<double>& q_grid, const Parameters& params) {
  if (q_grid.empty()) throw InvalidArgument("run_sweep: empty q grid");
  for (std::size_t i = 0; i < q_grid.size(); ++i) {
    QExponent check(q_grid[i], params);
    (void)check;
    if (i > 0 && !(q_grid[i] > q_grid[i - 1])) {
      std::ostringstream msg;
      msg << "q grid must be strictly increasing (q[" << i - 1 << "]=" << q_grid[i - 1] << ", q[" << i
          << "]=" << q_grid[i] << ")";
      throw InvalidArgument(msg.str());
    }
  }
}

void require_samples(const SweepResult& sweep, std::size_t n, const char* what) {
  if (sweep.size() < n) {
    std::ostringstream msg;
    msg << what << ": need at least " << n << " samples (have " << sweep.size() << ")";
    throw InsufficientData(msg.str());
  }
}

}  // namespace

SweepResult run_sweep(const Domain& domain, const Parameters& params, const std::vector<double>& q_grid,
                      const SolveOptions& opts, const SweepOptions& sweep_opts) {
  validate_grid(q_grid, params);
  const std::size_t n = q_grid.size();
  std::vector<std::optional<SolveResult>> solves(n);

  if (sweep_opts.warm_start) {
    SolveOptions local = opts;
    for (std::size_t i = 0; i < n; ++i) {
      if (i > 0) {
        local.seed_profile = SeedProfile::custom;
        const auto prev = solves[i - 1]->extremal.values();
        local.custom_seed.assign(prev.begin(), prev.end());
      }
      solves[i] = minimize_rayleigh(domain, QExponent(q_grid[i], params), params, local);
    }
  } else {
    SolveOptions local = opts;
    local.threads = 1;
    const int team = std::max(1, sweep_opts.threads);
    std::vector<std::string> errors(n);
#pragma omp parallel for schedule(dynamic) num_threads(team)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      try {
        solves[i] = minimize_rayleigh(domain, QExponent(q_grid[i], params), params, local);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
    for (const auto& e : errors) {
      if (!e.empty()) throw NonConvergence("run_sweep: " + e);
    }
  }

  SweepResult out{.params = params,
                  .domain = domain,
                  .volume = domain.volume(),
                  .mesh_size = domain.mesh_size(),
                  .q_grid = {},
                  .lambda_hat = {},
                  .scaled_lambda = {},
                  .stats = {},
                  .extremals = {}};
  const double p = params.p();
  for (std::size_t i = 0; i < n; ++i) {
    const SolveResult& s = *solves[i];
    out.q_grid.push_back(q_grid[i]);
    out.lambda_hat.push_back(s.lambda_hat);
    out.scaled_lambda.push_back(std::pow(out.volume, p / q_grid[i]) * s.lambda_hat);
    out.stats.push_back(ExtremalStats{
        .sup_norm = sup_norm(s.extremal),
        .l1_norm = ls_norm(s.extremal, 1.0),
        .iterations = s.iterations,
        .converged = s.converged,
        .concentration_regime = s.concentration_regime,
    });
    out.extremals.push_back(s.extremal);
  }
  return out;
}

MonotonicityReport check_monotonicity(const SweepResult& sweep, double relative_tolerance) {
  require_samples(sweep, 2, "check_monotonicity");
  MonotonicityReport report;
  report.relative_tolerance = relative_tolerance;
  report.pass = true;
  report.strict = true;
  for (std::size_t i = 0; i + 1 < sweep.size(); ++i) {
    if (!(sweep.q_grid[i + 1] > sweep.q_grid[i])) {
      throw InvalidArgument("check_monotonicity: q grid must be strictly increasing");
    }
    PairDecrement pair;
    pair.q_left = sweep.q_grid[i];
    pair.q_right = sweep.q_grid[i + 1];
    pair.left = sweep.scaled_lambda[i];
    pair.right = sweep.scaled_lambda[i + 1];
    pair.decrement = pair.left - pair.right;
    pair.relative = pair.decrement / std::abs(pair.left);
    pair.pass = pair.relative > -relative_tolerance;
    report.pass = report.pass && pair.pass;
    report.strict = report.strict && pair.decrement > 0.0;
    report.pairs.push_back(pair);
  }
  return report;
}

TotalVariation total_variation(const SweepResult& sweep) {
  require_samples(sweep, 2, "total_variation");
  const double p = sweep.params.p();
  std::vector<double> f(sweep.size());
  double f_max = 0.0;
  double g_max = 0.0;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    f[i] = std::pow(sweep.volume, -p / sweep.q_grid[i]);
    f_max = std::max(f_max, std::abs(f[i]));
    g_max = std::max(g_max, std::abs(sweep.scaled_lambda[i]));
  }
  TotalVariation tv;
  for (std::size_t i = 0; i + 1 < sweep.size(); ++i) {
    tv.total_variation += std::abs(sweep.lambda_hat[i + 1] - sweep.lambda_hat[i]);
    tv.decomposition_bound += f_max * std::abs(sweep.scaled_lambda[i + 1] - sweep.scaled_lambda[i]) +
                              g_max * std::abs(f[i + 1] - f[i]);
  }
  return tv;
}

ScalingReport scaling_check(const Parameters& params, const QExponent& q, double radius1, double radius2,
                            const SolveOptions& opts, int elements) {
  if (!(radius1 > 0.0) || !(radius2 > 0.0) || radius1 == radius2) {
    throw InvalidArgument("scaling_check: need distinct positive radii");
  }
  if (q.value() >= params.critical_exponent()) throw InvalidArgument("scaling_check: requires q < p*");
  const Domain d1 = Domain::radial_ball(params.n_dim(), radius1, elements);
  const Domain d2 = d1.scaled(radius2 / radius1);
  const SolveResult s1 = minimize_rayleigh(d1, q, params, opts);
  const SolveResult s2 = minimize_rayleigh(d2, q, params, opts);
  if (!s1.converged || !s2.converged) throw NonConvergence("scaling_check: solver did not converge");
  ScalingReport r;
  r.q = q.value();
  r.radius1 = radius1;
  r.radius2 = radius2;
  r.lambda1 = s1.lambda_hat;
  r.lambda2 = s2.lambda_hat;
  r.exponent = (params.n_dim() - params.p()) * (params.critical_exponent() / q.value() - 1.0);
  r.relative_mismatch = std::abs(r.lambda2 * std::pow(radius2 / radius1, r.exponent) - r.lambda1) / r.lambda1;
  r.converged = true;
  return r;
}

std::vector<BallBoundRow> ball_bound_check(const Parameters& params, const QExponent& q,
                                           const std::vector<double>& radii, const SolveOptions& opts,
                                           int elements) {
  std::vector<BallBoundRow> rows;
  for (double radius : radii) {
    const Domain d = Domain::radial_ball(params.n_dim(), radius, elements);
    const SolveResult s = minimize_rayleigh(d, q, params, opts);
    if (!s.converged) throw NonConvergence("ball_bound_check: solver did not converge");
    BallBoundRow row;
    row.radius = radius;
    row.lambda_hat = s.lambda_hat;
    row.bound = analytic::lambda_q_ball_upper_bound(q, params, radius);
    row.pass = row.lambda_hat <= row.bound;
    rows.push_back(row);
  }
  return rows;
}

PStarLimitReport p_star_limit_report(const SweepResult& sweep, const std::vector<double>& concentration) {
  if (sweep.domain.kind() != DomainKind::radial_ball) {
    throw InvalidArgument("p_star_limit_report: requires a radial ball sweep");
  }
  const Parameters& params = sweep.params;
  const double p = params.p();
  const double p_star = params.critical_exponent();
  PStarLimitReport report;
  report.sobolev_pth_power = analytic::sobolev_constant_pth_power(params);
  report.scaled_anchor = std::pow(sweep.volume, p / p_star) * report.sobolev_pth_power;
  report.anchors_pass = true;
  report.scaled_anchor_pass = true;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    CriticalAnchorRow row;
    row.q = sweep.q_grid[i];
    row.lambda_hat = sweep.lambda_hat[i];
    row.anchor = std::pow(sweep.volume, p / p_star - p / row.q) * report.sobolev_pth_power;
    row.pass = row.q < p_star ? row.lambda_hat > row.anchor : row.lambda_hat >= row.anchor;
    report.anchors_pass = report.anchors_pass && row.pass;
    report.scaled_anchor_pass = report.scaled_anchor_pass && sweep.scaled_lambda[i] > report.scaled_anchor;
    report.anchors.push_back(row);
  }
  const double radius = sweep.domain.radius();
  report.talenti_decreasing = true;
  for (double b : concentration) {
    TalentiRow row;
    row.b = b;
    row.rayleigh = analytic::truncated_talenti_rayleigh(params, radius, b);
    row.relative_gap = row.rayleigh / report.sobolev_pth_power - 1.0;
    if (!report.talenti.empty() && !(row.rayleigh < report.talenti.back().rayleigh)) {
      report.talenti_decreasing = false;
    }
    report.talenti.push_back(row);
  }
  report.final_gap = report.talenti.empty() ? 0.0 : report.talenti.back().relative_gap;
  report.slow_concentration = report.final_gap > 0.05;
  return report;
}

DerivativeReconstruction derivative_reconstruction(const SweepResult& sweep) {
  require_samples(sweep, 2, "derivative_reconstruction");
  const auto& q = sweep.q_grid;
  const auto& y = sweep.lambda_hat;
  const std::size_t n = q.size();
  DerivativeReconstruction out;
  out.derivative.resize(n);
  if (n == 2) {
    const double slope = (y[1] - y[0]) / (q[1] - q[0]);
    out.derivative = {slope, slope};
  } else {
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const double hm = q[i] - q[i - 1];
      const double hp = q[i + 1] - q[i];
      out.derivative[i] = (hm * hm * (y[i + 1] - y[i]) + hp * hp * (y[i] - y[i - 1])) / (hm * hp * (hm + hp));
    }
    // second-order one-sided differences at the ends
    auto one_sided = [](double x0, double x1, double x2, double y0, double y1, double y2) {
      const double h1 = x1 - x0;
      const double h2 = x2 - x0;
      return (y1 - y0) * h2 / (h1 * (h2 - h1)) - (y2 - y0) * h1 / (h2 * (h2 - h1));
    };
    out.derivative[0] = one_sided(q[0], q[1], q[2], y[0], y[1], y[2]);
    out.derivative[n - 1] = one_sided(q[n - 1], q[n - 2], q[n - 3], y[n - 1], y[n - 2], y[n - 3]);
  }
  out.reconstruction.resize(n);
  out.reconstruction[0] = y[0];
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out.reconstruction[i + 1] =
        out.reconstruction[i] + 0.5 * (out.derivative[i] + out.derivative[i + 1]) * (q[i + 1] - q[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    out.max_relative_deviation =
        std::max(out.max_relative_deviation, std::abs(out.reconstruction[i] - y[i]) / std::abs(y[i]));
  }
  return out;
}

}  // namespace sobolev
