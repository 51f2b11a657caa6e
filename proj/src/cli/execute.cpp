#include <cmath>
#include <filesystem>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "sobolev/analytic.hpp"
#include "sobolev/bounds.hpp"
#include "sobolev/cli.hpp"
#include "sobolev/error.hpp"
#include "sobolev/functional.hpp"
#include "sobolev/io.hpp"
#include "sobolev/solver.hpp"
#include "sobolev/svg_plot.hpp"
#include "sobolev/sweep.hpp"

namespace sobolev::cli {

namespace fs = std::filesystem;
using io::format_real;

namespace {

Domain make_domain(const RunConfig& c) {
  if (c.domain == "ball") return Domain::radial_ball(c.n, c.radius, c.mesh);
  if (c.domain == "grid-ball") {
    const double r = c.radius;
    const double z = c.n == 3 ? r : 0.0;
    return Domain::grid_from_predicate(c.n, c.h, {-r, -r, -z}, {r, r, z}, [r](const std::array<double, 3>& x) {
      return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] < r * r;
    });
  }
  if (c.domain == "box") {
    const std::array<double, 3> upper{c.box[0], c.box[1], c.n == 3 ? c.box[2] : 0.0};
    return Domain::grid_from_predicate(c.n, c.h, {0.0, 0.0, 0.0}, upper,
                                       [](const std::array<double, 3>&) { return true; });
  }
  Domain d = domain_from_json(io::read_file(c.domain_file));
  if (d.n_dim() != c.n) {
    throw ConfigError("parameter_violation", "n",
                      "domain file has dimension " + std::to_string(d.n_dim()) + " but n=" + std::to_string(c.n));
  }
  return d;
}

SolveOptions solve_options(const RunConfig& c) {
  SolveOptions o;
  o.max_iterations = c.max_iterations;
  o.tolerance_rel = c.tolerance;
  o.gradient_tolerance = c.gradient_tolerance;
  o.seed_profile = c.seed_profile == "torsion" ? SeedProfile::torsion_like : SeedProfile::w1_profile;
  o.threads = c.threads;
  return o;
}

std::vector<double> q_grid(const RunConfig& c, const Parameters& params) {
  if (c.q_grid == "list") return c.q_list;
  const double p_star = params.critical_exponent();
  if (c.q_grid == "uniform") {
    return uniform_q_grid(c.q_min, c.q_max != 0.0 ? c.q_max : p_star - c.q_margin, c.q_points);
  }
  double margin = c.q_margin;
  if (c.q_max != 0.0) margin = p_star - c.q_max;
  return default_q_grid(params, c.q_points, margin);
}

struct Context {
  const RunConfig& config;
  std::string hash;
  fs::path dir;
  std::ostream& out;
  std::vector<std::string> written;

  void write(const std::string& name, const std::string& content) {
    io::write_file(dir / name, content);
    written.push_back((dir / name).string());
  }
};

void plot_sweep(Context& ctx, const std::vector<double>& q, const std::vector<double>& lambda,
                const std::vector<double>& scaled) {
  if (!ctx.config.wants("svg") || q.empty()) return;
  svg::Plot a;
  a.title = "lambda_q";
  a.x_label = "q";
  a.y_label = "lambda_hat";
  a.series.push_back({"lambda_hat", q, lambda, "#1f77b4"});
  a.comment = "config_hash=" + ctx.hash;
  ctx.write("lambda.svg", svg::render(a));
  svg::Plot b = a;
  b.title = "|Omega|^{p/q} lambda_q";
  b.y_label = "scaled lambda_hat";
  b.series = {{"|Omega|^{p/q} lambda_hat", q, scaled, "#d62728"}};
  ctx.write("scaled_lambda.svg", svg::render(b));
}

void write_sweep(Context& ctx, const SweepResult& sweep) {
  if (ctx.config.wants("csv")) ctx.write("sweep.csv", io::sweep_csv(sweep, ctx.hash));
  if (ctx.config.wants("json")) ctx.write("sweep.json", io::sweep_json(sweep, ctx.hash));
  plot_sweep(ctx, sweep.q_grid, sweep.lambda_hat, sweep.scaled_lambda);
}

int run_analytic(Context& ctx, const Parameters& params) {
  const RunConfig& c = ctx.config;
  double value = 0.0;
  if (c.quantity == "sobolev-constant") value = analytic::sobolev_constant(params);
  else if (c.quantity == "sobolev-upper-bound") value = analytic::sobolev_upper_bound(params);
  else if (c.quantity == "lambda1-ball") value = analytic::lambda1_ball(params, c.radius);
  else if (c.quantity == "torsion-ball") value = analytic::torsion_ball(c.r, params, c.radius);
  else if (c.quantity == "critical-exponent") value = params.critical_exponent();
  else value = analytic::talenti_value(analytic::TalentiProfile(c.a, c.b, params), c.r);
  ctx.out << format_real(value) << '\n';
  if (c.wants("json")) {
    nlohmann::ordered_json j{{"config_hash", ctx.hash}, {"quantity", c.quantity}, {"value", value}};
    ctx.write("analytic.json", j.dump(2) + "\n");
  }
  return kOk;
}

int run_solve(Context& ctx, const Parameters& params) {
  const RunConfig& c = ctx.config;
  const Domain domain = make_domain(c);
  const QExponent q(c.q, params);
  const SolveOptions opts = solve_options(c);
  const SolveResult r = minimize_rayleigh(domain, q, params, opts);
  ctx.out << "lambda_hat " << format_real(r.lambda_hat) << '\n';
  ctx.out << "iterations " << r.iterations << " converged " << (r.converged ? "yes" : "no") << '\n';
  if (r.concentration_regime) ctx.out << "note: q within 0.1 of p*, no convergence claim\n";
  if (c.wants("json")) ctx.write("solve.json", io::solve_json(r, params, ctx.hash));
  if (c.wants("csv")) ctx.write("extremal.csv", io::field_csv(r.extremal, ctx.hash));
  if (c.refine >= 2) {
    const RefinementResult ref = refine_and_extrapolate(domain, q, params, opts, c.refine);
    for (std::size_t i = 0; i < ref.mesh_sizes.size(); ++i) {
      ctx.out << "mesh " << ref.mesh_sizes[i] << " lambda_hat " << format_real(ref.lambda_hat[i]) << '\n';
    }
    ctx.out << "richardson " << format_real(ref.richardson_limit) << " order " << format_real(ref.observed_order)
            << '\n';
    if (c.wants("json")) {
      nlohmann::ordered_json j{{"config_hash", ctx.hash},
                               {"mesh_sizes", ref.mesh_sizes},
                               {"lambda_hat", ref.lambda_hat},
                               {"richardson_limit", ref.richardson_limit},
                               {"observed_order", ref.observed_order}};
      ctx.write("refinement.json", j.dump(2) + "\n");
    }
  }
  return r.converged ? kOk : kNonConvergence;
}

int run_torsion(Context& ctx, const Parameters& params) {
  const RunConfig& c = ctx.config;
  const Domain domain = make_domain(c);
  const TorsionResult r = solve_torsion(domain, params, solve_options(c));
  ctx.out << "lambda1_hat " << format_real(r.lambda1_hat) << '\n';
  ctx.out << "l1_norm " << format_real(r.l1_norm) << '\n';
  ctx.out << "iterations " << r.iterations << " converged " << (r.converged ? "yes" : "no") << '\n';
  if (c.wants("json")) ctx.write("torsion.json", io::torsion_json(r, params, ctx.hash));
  if (c.wants("csv")) ctx.write("torsion.csv", io::field_csv(r.torsion, ctx.hash));
  return r.converged ? kOk : kNonConvergence;
}

SweepResult sweep_from(const RunConfig& c, const Parameters& params) {
  const Domain domain = make_domain(c);
  const std::vector<double> grid = q_grid(c, params);
  SweepOptions so;
  so.warm_start = !c.cold_start;
  so.threads = c.threads;
  return run_sweep(domain, params, grid, solve_options(c), so);
}

int run_sweep_command(Context& ctx, const Parameters& params) {
  const SweepResult sweep = sweep_from(ctx.config, params);
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    ctx.out << format_real(sweep.q_grid[i]) << ' ' << format_real(sweep.lambda_hat[i]) << ' '
            << format_real(sweep.scaled_lambda[i]) << (sweep.stats[i].converged ? "" : " not-converged") << '\n';
  }
  write_sweep(ctx, sweep);
  return sweep.all_converged() ? kOk : kNonConvergence;
}

int run_verify(Context& ctx, const Parameters& params) {
  const RunConfig& c = ctx.config;
  const SweepResult sweep = sweep_from(c, params);
  write_sweep(ctx, sweep);
  VerifyOptions vo;
  vo.seed = c.seed;
  vo.solver_tolerance = c.tolerance;
  const VerificationReport report = verify_all(sweep, c.epsilon, vo);
  const std::string text = io::report_text(report);
  ctx.out << text;
  if (c.wants("json")) ctx.write("report.json", io::report_json(report, ctx.hash));
  ctx.write("report.txt", text);
  return report.pass ? kOk : kVerificationFailure;
}

int run_bracket(Context& ctx, const Parameters& params) {
  const RunConfig& c = ctx.config;
  const Domain domain = make_domain(c);
  const SolveOptions opts = solve_options(c);
  const SolveResult at_q = minimize_rayleigh(domain, QExponent(c.q, params), params, opts);
  const SolveResult at_s = minimize_rayleigh(domain, QExponent(c.s, params), params, opts);
  if (!at_q.converged || !at_s.converged) throw NonConvergence("bracket: solver did not converge");
  ContinuityBracket b;
  try {
    b = continuity_bracket(at_q.extremal, QExponent(c.q, params), c.s, at_q.lambda_hat, params);
  } catch (const OutOfRegime& e) {
    throw ConfigError("out_of_regime", "s", e.what());
  }
  const double middle = std::pow(domain.volume(), params.p() / c.s) * at_s.lambda_hat;
  const double tol = 2.0 * c.tolerance * std::abs(middle);
  const bool ok = b.lower <= middle + tol && middle <= b.upper + tol;
  ctx.out << "lower " << format_real(b.lower) << '\n'
          << "scaled_lambda_s " << format_real(middle) << '\n'
          << "upper " << format_real(b.upper) << '\n'
          << "M_q " << format_real(b.m_q) << '\n'
          << (ok ? "bracket holds\n" : "bracket violated\n");
  if (c.wants("json")) {
    nlohmann::ordered_json j{{"config_hash", ctx.hash}, {"q", b.q},          {"s", b.s},
                             {"lower", b.lower},        {"middle", middle},  {"upper", b.upper},
                             {"m_q", b.m_q},            {"holds", ok}};
    ctx.write("bracket.json", j.dump(2) + "\n");
  }
  return ok ? kOk : kVerificationFailure;
}

int run_plot(Context& ctx) {
  const io::SweepTable t = io::read_sweep_csv(io::read_file(ctx.config.input));
  if (t.q.empty()) throw ConfigError("invalid_value", "input", "sweep CSV has no rows");
  RunConfig forced = ctx.config;
  forced.formats = {"svg"};
  Context svg_ctx{forced, ctx.hash, ctx.dir, ctx.out, {}};
  plot_sweep(svg_ctx, t.q, t.lambda_hat, t.scaled_lambda);
  for (const auto& f : svg_ctx.written) ctx.out << f << '\n';
  ctx.written.insert(ctx.written.end(), svg_ctx.written.begin(), svg_ctx.written.end());
  return kOk;
}

std::string error_record(const std::string& kind, const std::string& key, const std::string& message, int code) {
  nlohmann::ordered_json j{{"error", {{"kind", kind}, {"key", key}, {"message", message}, {"exit_code", code}}}};
  return j.dump() + "\n";
}

}  // namespace

int execute(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Context ctx{config, config_hash(config), fs::path(config.output_dir), out, {}};
  std::string kind;
  std::string key;
  std::string message;
  int code = kOk;
  try {
    ctx.write("config.json", config_json(config));
    const Parameters params(config.p, config.n);
    const std::string& cmd = config.command;
    if (cmd == "analytic") code = run_analytic(ctx, params);
    else if (cmd == "solve") code = run_solve(ctx, params);
    else if (cmd == "torsion") code = run_torsion(ctx, params);
    else if (cmd == "sweep") code = run_sweep_command(ctx, params);
    else if (cmd == "verify") code = run_verify(ctx, params);
    else if (cmd == "bracket") code = run_bracket(ctx, params);
    else if (cmd == "plot") code = run_plot(ctx);
    else throw ConfigError("invalid_value", "command", "unknown command '" + cmd + "'");
    if (code == kNonConvergence) {
      kind = "non_convergence";
      message = "solver did not converge";
    } else if (code == kVerificationFailure) {
      kind = "verification_failure";
      message = "one or more checks failed";
    }
  } catch (const ConfigError& e) {
    code = kConfigError;
    kind = e.kind();
    key = e.key();
    message = e.what();
  } catch (const NonConvergence& e) {
    code = kNonConvergence;
    kind = "non_convergence";
    message = e.what();
  } catch (const OutOfRegime& e) {
    code = kConfigError;
    kind = "out_of_regime";
    message = e.what();
  } catch (const InvalidArgument& e) {
    code = kConfigError;
    kind = "invalid_value";
    message = e.what();
  } catch (const InsufficientData& e) {
    code = kConfigError;
    kind = "insufficient_data";
    message = e.what();
  } catch (const std::exception& e) {
    code = kInternalError;
    kind = "internal";
    message = e.what();
  }
  if (code != kOk) {
    const std::string record = error_record(kind, key, message, code);
    err << record;
    try {
      io::write_file(ctx.dir / "error.json", record);
    } catch (const std::exception&) {
      // output directory unusable; the record on stderr stands
    }
  }
  return code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig config;
  try {
    std::string help;
    config = parse_config(args, &help);
    if (config.command.empty()) {
      out << help;
      return kOk;
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    err << error_record(e.kind(), e.key(), e.what(), kConfigError);
    return kConfigError;
  }
  return execute(config, out, err);
}

}  // namespace sobolev::cli
