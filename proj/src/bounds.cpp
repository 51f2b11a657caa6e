#include "sobolev/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "sobolev/analytic.hpp"
#include "sobolev/error.hpp"
#include "sobolev/functional.hpp"

namespace sobolev {

namespace {

constexpr double kSeriesGuard = 1e-6;
constexpr double kNormalizationTolerance = 1e-9;
constexpr double kHolderTolerance = 1e-12;
constexpr double kIdentityTolerance = 1e-8;
constexpr double kEntropyTolerance = 1e-9;
constexpr double kMonotoneTolerance = 1e-9;
constexpr double kGridMatch = 1e-12;

std::string fmt_q(double q) {
  std::ostringstream s;
  s.precision(6);
  s << q;
  return s.str();
}

double log_expm1(double x) {
  // log(e^x - 1) for x > 0
  return x > 1.0 ? x + std::log1p(-std::exp(-x)) : std::log(std::expm1(x));
}

double h_series(double xi, double a) {
  const double d = xi - 1.0;
  double term = a;
  double sum = a;
  for (int k = 1; k < 400; ++k) {
    term *= (a - k) / (k + 1.0) * d;
    sum += term;
    if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
  }
  return sum;
}

double h_closed(double xi, double a) {
  const double d = xi - 1.0;
  return std::expm1(a * std::log1p(d)) / d;
}

}  // namespace

double c_q(const QExponent& q, double lambda_q, const Parameters& params) {
  (void)q;
  if (!(lambda_q > 0.0) || !std::isfinite(lambda_q)) throw InvalidArgument("c_q: lambda_q must be positive");
  const double p = params.p();
  const int n = params.n_dim();
  const double base = p / (p + n * (p - 1.0));
  return std::pow(base, n + 1) * std::pow(analytic::sobolev_constant_pth_power(params) / lambda_q, n / p);
}

LevelSetCheck level_set_bound_check(const DiscreteField& w, const QExponent& q, double sigma, double lambda_q,
                                    const Parameters& params) {
  if (!(sigma >= 1.0)) throw InvalidArgument("level_set_bound_check: sigma must be >= 1");
  const auto values = w.values();
  if (std::any_of(values.begin(), values.end(), [](double v) { return v < 0.0; })) {
    throw InvalidArgument("level_set_bound_check: field must be nonnegative");
  }
  const WeightedSamples samples = sample(w);
  const double norm_q = ls_norm(samples, q.value());
  if (std::abs(norm_q - 1.0) > kNormalizationTolerance) {
    std::ostringstream msg;
    msg << "level_set_bound_check: normalization violated (||w||_q = " << norm_q << ")";
    throw InvalidArgument(msg.str());
  }
  const double p = params.p();
  const int n = params.n_dim();
  LevelSetCheck out;
  out.q = q.value();
  out.sigma = sigma;
  out.c_q = c_q(q, lambda_q, params);
  out.sup_norm = sup_norm(w);
  out.lhs = std::pow(2.0, -(n * (p - 1.0) + sigma * p) / p) * out.c_q *
            std::pow(out.sup_norm, (n * (p - q.value()) + sigma * p) / p);
  out.rhs = std::pow(ls_norm(samples, sigma), sigma);
  out.slack = out.rhs - out.lhs;
  out.pass = out.slack > 0.0;
  return out;
}

ConstantsLedger build_ledger(const SweepResult& sweep, double epsilon) {
  const Parameters& params = sweep.params;
  const double p = params.p();
  const int n = params.n_dim();
  const double p_star = params.critical_exponent();
  if (!(epsilon > 0.0) || p_star - epsilon < 1.0) {
    throw InvalidArgument("build_ledger: epsilon must satisfy 0 < epsilon <= p* - 1");
  }
  if (sweep.size() == 0) throw InsufficientData("build_ledger: empty sweep");
  if (std::abs(sweep.q_grid.front() - 1.0) > kGridMatch) {
    throw InsufficientData("build_ledger: sweep must start at q = 1 (lambda_1 enters the Lipschitz bound)");
  }
  const double q_hi = p_star - epsilon;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    if (sweep.q_grid[i] <= q_hi + kGridMatch && !sweep.stats[i].converged) {
      throw InsufficientData("build_ledger: sample at q=" + fmt_q(sweep.q_grid[i]) + " did not converge");
    }
  }

  ConstantsLedger ledger;
  ledger.epsilon = epsilon;
  ledger.volume = sweep.volume;
  ledger.lambda1_hat = sweep.lambda_hat.front();
  const double vol = sweep.volume;
  const double two_pow = std::pow(2.0, (n * (p - 1.0) + p) / p);

  bool low_seen = false;
  bool high_seen = false;
  std::vector<double> cq(sweep.size());
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const double q = sweep.q_grid[i];
    cq[i] = c_q(QExponent(q, params), sweep.lambda_hat[i], params);
    ledger.c_q_samples.emplace_back(q, cq[i]);
    if (q <= p + kGridMatch) {
      low_seen = true;
      ledger.a_tilde = std::max(
          ledger.a_tilde, std::pow(two_pow * std::pow(vol, (q - 1.0) / q) / cq[i], p / (p + n * (p - q))));
      ledger.a_const = std::max(ledger.a_const, std::pow(vol, 1.0 + n * (p - q) / (p * q)) / cq[i]);
    }
    if (q >= p - kGridMatch && q <= q_hi + kGridMatch) {
      high_seen = true;
      ledger.b_tilde_eps =
          std::max(ledger.b_tilde_eps, std::pow(std::pow(2.0, (n * (p - 1.0) + q * p) / p) / cq[i],
                                                p / ((n - p) * (p_star - q))));
    }
  }
  if (!low_seen || !high_seen) {
    std::ostringstream msg;
    msg << "build_ledger: need sampled q in [1, " << p << "] and in [" << p << ", " << q_hi << "]";
    throw InsufficientData(msg.str());
  }
  ledger.c_q_increasing = true;
  for (std::size_t i = 1; i < cq.size(); ++i) ledger.c_q_increasing = ledger.c_q_increasing && cq[i] > cq[i - 1];

  ledger.c_eps = std::max(ledger.a_tilde, ledger.b_tilde_eps);
  ledger.a_const *= two_pow;
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const double q = sweep.q_grid[i];
    if (q >= p - kGridMatch && q <= q_hi + kGridMatch) {
      ledger.b_eps = std::max(ledger.b_eps, std::pow(ledger.c_eps, n * (q - p) / p) / cq[i]);
    }
  }
  ledger.b_eps *= two_pow * vol;
  ledger.d_eps = std::max(ledger.a_const, ledger.b_eps);

  const LipschitzConstant l = lipschitz_constant(epsilon, ledger.d_eps, params);
  ledger.l_eps = l.l_eps;
  ledger.log_l_eps = l.log_l_eps;
  ledger.log_lipschitz_bound = p * std::log(vol) + std::log(ledger.lambda1_hat) + ledger.log_l_eps;
  return ledger;
}

double d_epsilon(double epsilon, const SweepResult& sweep) { return build_ledger(sweep, epsilon).d_eps; }

LinfCheck linf_bounds_check(const DiscreteField& w, const QExponent& q, const ConstantsLedger& ledger,
                            const Parameters& params) {
  if (q.value() > params.critical_exponent() - ledger.epsilon + kGridMatch) {
    throw OutOfRegime("linf_bounds_check: q=" + fmt_q(q.value()) + " exceeds p* - epsilon");
  }
  const double vol = w.domain().volume();
  LinfCheck out;
  out.q = q.value();
  out.lower = std::pow(vol, -1.0 / q.value());
  out.sup_norm = sup_norm(w);
  out.upper = ledger.c_eps;
  out.lower_pass = out.lower <= out.sup_norm * (1.0 + kHolderTolerance);
  out.upper_pass = out.sup_norm <= out.upper;
  return out;
}

double lipschitz_h(double xi, double a, HBranch branch) {
  if (!(xi > 0.0)) throw InvalidArgument("lipschitz_h: xi must be positive");
  if (xi == 1.0) return a;
  const bool series = branch == HBranch::series ||
                      (branch == HBranch::automatic && std::abs(xi - 1.0) < kSeriesGuard);
  return series ? h_series(xi, a) : h_closed(xi, a);
}

double log_lipschitz_h(double xi, double a) {
  if (!(a > 0.0)) throw InvalidArgument("log_lipschitz_h: exponent must be positive");
  if (xi <= 1.0 || xi - 1.0 < kSeriesGuard) return std::log(lipschitz_h(xi, a));
  const double d = xi - 1.0;
  return log_expm1(a * std::log1p(d)) - std::log(d);
}

LipschitzConstant lipschitz_constant(double epsilon, double d_eps, const Parameters& params) {
  if (!(epsilon > 0.0) || !(d_eps > 0.0)) throw InvalidArgument("lipschitz_constant: epsilon and d_eps must be positive");
  const double xi_max = params.critical_exponent() - epsilon;
  if (xi_max < 1.0) throw InvalidArgument("lipschitz_constant: p* - epsilon must be >= 1");
  const double a = params.p() * d_eps;
  LipschitzConstant out;
  // H is increasing on xi > 1 when a > 1 and nonincreasing otherwise
  out.log_l_eps = a > 1.0 ? log_lipschitz_h(xi_max, a) : std::log(a);
  out.l_eps = std::exp(out.log_l_eps);
  return out;
}

std::size_t VerificationReport::failures() const {
  return static_cast<std::size_t>(std::count_if(items.begin(), items.end(), [](const auto& i) { return !i.pass; }));
}

const VerificationItem* VerificationReport::first_failure() const {
  for (const auto& item : items) {
    if (!item.pass) return &item;
  }
  return nullptr;
}

VerificationReport verify_all(const SweepResult& sweep, double epsilon, const VerifyOptions& opts) {
  VerificationReport report;
  report.epsilon = epsilon;
  if (sweep.size() == 0) {
    report.vacuous = true;
    report.pass = false;
    return report;
  }
  const Parameters& params = sweep.params;
  const double p = params.p();
  const double p_star = params.critical_exponent();
  const double vol = sweep.volume;
  const std::size_t n = sweep.size();

  auto failed = [&](const std::string& name, const std::string& anchor, const std::string& what) {
    VerificationItem item;
    item.name = name;
    item.anchor = anchor;
    item.lhs = item.rhs = item.slack = std::numeric_limits<double>::quiet_NaN();
    item.pass = false;
    item.note = what;
    report.items.push_back(item);
  };

  std::vector<double> scaled(n);
  for (std::size_t i = 0; i < n; ++i) scaled[i] = std::pow(vol, p / sweep.q_grid[i]) * sweep.lambda_hat[i];

  for (std::size_t i = 0; i < n; ++i) {
    VerificationItem item;
    item.name = "solver converged q=" + fmt_q(sweep.q_grid[i]);
    item.anchor = "extremal existence";
    item.lhs = sweep.stats[i].converged ? 1.0 : 0.0;
    item.rhs = 1.0;
    item.slack = item.lhs - item.rhs;
    item.pass = sweep.stats[i].converged;
    item.note = std::to_string(sweep.stats[i].iterations) + " iterations";
    report.items.push_back(item);
  }

  for (std::size_t i = 0; i + 1 < n; ++i) {
    VerificationItem item;
    item.name = "monotonicity q=" + fmt_q(sweep.q_grid[i]) + "->" + fmt_q(sweep.q_grid[i + 1]);
    item.anchor = "strict decrease of |Omega|^{p/q} lambda_q";
    item.lhs = scaled[i + 1];
    item.rhs = scaled[i];
    item.slack = item.rhs - item.lhs;
    item.tolerance = kMonotoneTolerance * std::abs(item.rhs);
    item.pass = sweep.q_grid[i + 1] > sweep.q_grid[i] && item.slack > -item.tolerance;
    if (item.slack <= 0.0 && item.pass) item.note = "non-strict within tolerance";
    report.items.push_back(item);
  }

  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uniform(1.0, p_star);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = sweep.q_grid[i];
    const DiscreteField& w = sweep.extremals[i];
    for (int k = 0; k < opts.identity_pairs; ++k) {
      double s1 = 0.0;
      double s2 = 0.0;
      do {
        s1 = uniform(rng);
        s2 = uniform(rng);
        if (s1 > s2) std::swap(s1, s2);
      } while (s2 - s1 < 1e-3);
      const std::string name = "exponential identity q=" + fmt_q(q) + " s=(" + fmt_q(s1) + "," + fmt_q(s2) + ")";
      try {
        const IdentityCheck c = identity_check(w, s1, s2, params);
        VerificationItem item;
        item.name = name;
        item.anchor = "exponential q-dependence identity";
        item.lhs = c.lhs;
        item.rhs = c.rhs;
        item.slack = -c.relative_residual;
        item.tolerance = kIdentityTolerance;
        item.pass = c.relative_residual <= kIdentityTolerance;
        report.items.push_back(item);
      } catch (const std::exception& e) {
        failed(name, "exponential q-dependence identity", e.what());
      }
    }
    for (double t : {1.0, q, p, p_star}) {
      const std::string name = "entropy nonnegative q=" + fmt_q(q) + " t=" + fmt_q(t);
      try {
        VerificationItem item;
        item.name = name;
        item.anchor = "K(t,u) >= 0 (Jensen)";
        item.lhs = 0.0;
        item.rhs = entropy_K(w, t);
        item.slack = item.rhs;
        item.tolerance = kEntropyTolerance;
        item.pass = item.slack >= -item.tolerance;
        report.items.push_back(item);
      } catch (const std::exception& e) {
        failed(name, "K(t,u) >= 0 (Jensen)", e.what());
      }
    }
    for (double sigma : {1.0, q, p}) {
      const std::string name = "level-set estimate q=" + fmt_q(q) + " sigma=" + fmt_q(sigma);
      try {
        const LevelSetCheck c = level_set_bound_check(w, QExponent(q, params), sigma, sweep.lambda_hat[i], params);
        VerificationItem item;
        item.name = name;
        item.anchor = "level-set estimate for extremals";
        item.lhs = c.lhs;
        item.rhs = c.rhs;
        item.slack = c.slack;
        item.pass = c.pass;
        item.note = "C_q from lambda_hat >= lambda_q: one-sided";
        report.items.push_back(item);
      } catch (const std::exception& e) {
        failed(name, "level-set estimate for extremals", e.what());
      }
    }
    {
      VerificationItem item;
      item.name = "L-infinity lower bound q=" + fmt_q(q);
      item.anchor = "Holder lower bound on ||w_q||_inf";
      item.lhs = std::pow(vol, -1.0 / q);
      item.rhs = sweep.stats[i].sup_norm;
      item.slack = item.rhs - item.lhs;
      item.tolerance = kHolderTolerance * item.rhs;
      item.pass = item.slack >= -item.tolerance;
      report.items.push_back(item);
    }
    {
      VerificationItem item;
      item.name = "critical anchor q=" + fmt_q(q);
      item.anchor = "lambda_q > |Omega|^{p/p*-p/q} S^p";
      item.lhs = std::pow(vol, p / p_star - p / q) * analytic::sobolev_constant_pth_power(params);
      item.rhs = sweep.lambda_hat[i];
      item.slack = item.rhs - item.lhs;
      item.pass = q < p_star ? item.slack > 0.0 : item.slack >= 0.0;
      report.items.push_back(item);
    }
  }

  try {
    report.ledger = build_ledger(sweep, epsilon);
    report.has_ledger = true;
  } catch (const std::exception& e) {
    failed("constants ledger", "explicit constants C_eps, D_eps, L_eps", e.what());
  }

  if (report.has_ledger) {
    const ConstantsLedger& ledger = report.ledger;
    const double q_hi = p_star - epsilon;
    double scaled_max = 0.0;
    for (double s : scaled) scaled_max = std::max(scaled_max, std::abs(s));
    for (std::size_t i = 0; i < n; ++i) {
      const double q = sweep.q_grid[i];
      if (q > q_hi + kGridMatch) continue;
      const std::string name = "L-infinity upper bound q=" + fmt_q(q);
      try {
        const LinfCheck c = linf_bounds_check(sweep.extremals[i], QExponent(q, params), ledger, params);
        VerificationItem item;
        item.name = name;
        item.anchor = "||w_q||_inf <= C_eps uniformly in q";
        item.lhs = c.sup_norm;
        item.rhs = c.upper;
        item.slack = c.upper - c.sup_norm;
        item.pass = c.upper_pass;
        report.items.push_back(item);
      } catch (const std::exception& e) {
        failed(name, "||w_q||_inf <= C_eps uniformly in q", e.what());
      }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      const double s = sweep.q_grid[i];
      const double q = sweep.q_grid[i + 1];
      if (q > q_hi + kGridMatch) break;
      VerificationItem item;
      item.name = "Lipschitz q=" + fmt_q(s) + "->" + fmt_q(q);
      item.anchor = "Lipschitz continuity on [1, p*-eps]";
      item.lhs = std::abs(scaled[i] - scaled[i + 1]);
      const double log_rhs = ledger.log_lipschitz_bound + std::log(q - s);
      item.rhs = std::exp(log_rhs);
      item.slack = item.rhs - item.lhs;
      item.tolerance = 2.0 * opts.solver_tolerance * scaled_max;
      item.pass = item.lhs <= item.tolerance || std::log(item.lhs - item.tolerance) <= log_rhs;
      item.note = "log(rhs)=" + std::to_string(log_rhs);
      report.items.push_back(item);
    }
  }

  report.pass = !report.items.empty() && report.failures() == 0;
  return report;
}

}  // namespace sobolev
