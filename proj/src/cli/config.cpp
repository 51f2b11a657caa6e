#include <algorithm>
#include <cstdlib>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "sobolev/cli.hpp"
#include "sobolev/core.hpp"
#include "sobolev/error.hpp"
#include "sobolev/io.hpp"

namespace sobolev::cli {

namespace {

const std::vector<std::string> kAnalyticQuantities{"sobolev-constant", "sobolev-upper-bound", "lambda1-ball",
                                                   "torsion-ball",     "critical-exponent",   "talenti"};
const std::vector<std::string> kCommands{"solve", "torsion", "sweep", "verify", "bracket", "plot"};

[[noreturn]] void reject(const std::string& kind, const std::string& key, const std::string& message) {
  throw ConfigError(kind, key, message);
}

// First "--flag" token of a parser message, else its last word.
std::string offending_key(const std::string& what) {
  std::istringstream in(what);
  std::string token;
  std::string last;
  while (in >> token) {
    if (token.rfind("--", 0) == 0) return token.substr(2);
    last = token;
  }
  return last;
}

void apply_preset(RunConfig& c, const CLI::App& app) {
  if (c.preset.empty()) return;
  auto unset = [&](const char* name) { return app.get_option(name)->count() == 0; };
  // unit-ball-p2
  if (unset("--p")) c.p = 2.0;
  if (unset("--n")) c.n = 3;
  if (unset("--domain")) c.domain = "ball";
  if (unset("--radius")) c.radius = 1.0;
  if (unset("--mesh")) c.mesh = 1024;
  if (unset("--q-grid")) c.q_grid = "default";
  if (unset("--q-points")) c.q_points = 20;
  if (unset("--epsilon")) c.epsilon = 0.5;
}

void validate(RunConfig& c) {
  double p_star = 0.0;
  try {
    p_star = Parameters(c.p, c.n).critical_exponent();
  } catch (const InvalidArgument& e) {
    reject("parameter_violation", c.n < 2 ? "n" : "p", e.what());
  }
  if (c.mesh < 1) reject("invalid_value", "mesh", "mesh must be >= 1");
  if (!(c.radius > 0.0)) reject("invalid_value", "radius", "radius must be positive");
  if (!(c.h > 0.0)) reject("invalid_value", "h", "h must be positive");
  if (c.threads < 1) reject("invalid_value", "threads", "threads must be >= 1");
  if (c.max_iterations < 1) reject("invalid_value", "max-iterations", "max-iterations must be >= 1");
  if (!(c.tolerance > 0.0)) reject("invalid_value", "tolerance", "tolerance must be positive");
  if (!(c.gradient_tolerance > 0.0)) reject("invalid_value", "gradient-tolerance", "gradient-tolerance must be positive");
  if (c.domain == "file" && c.domain_file.empty()) reject("missing_value", "domain-file", "--domain file needs --domain-file");
  if (c.domain == "box" && static_cast<int>(c.box.size()) < c.n) {
    reject("invalid_value", "box", "box needs one side length per dimension");
  }
  if ((c.domain == "box" || c.domain == "grid-ball") && c.n != 2 && c.n != 3) {
    reject("parameter_violation", "n", "grid domains need n = 2 or 3");
  }

  auto check_q = [&](double q, const std::string& key) {
    if (!(q >= 1.0 && q <= p_star)) {
      std::ostringstream msg;
      msg << key << "=" << q << " outside [1, p*] with p*=" << p_star;
      reject("q_out_of_range", key, msg.str());
    }
  };
  const std::string& cmd = c.command;
  if (cmd == "solve" || cmd == "bracket") check_q(c.q, "q");
  if (cmd == "sweep" || cmd == "verify") {
    if (c.q_grid == "list") {
      if (c.q_list.empty()) reject("missing_value", "q-list", "--q-grid list needs --q-list");
      for (double q : c.q_list) check_q(q, "q-list");
    } else {
      if (c.q_points < 1) reject("invalid_value", "q-points", "q-points must be >= 1");
      if (!(c.q_margin >= 0.0) || c.q_margin >= p_star - 1.0) reject("invalid_value", "q-margin", "q-margin out of range");
      check_q(c.q_min, "q-min");
      if (c.q_max != 0.0) check_q(c.q_max, "q-max");
    }
  }
  if (cmd == "verify" && !(c.epsilon > 0.0)) {
    reject("missing_value", "epsilon", "verify needs --epsilon > 0 (or a preset)");
  }
  if (cmd == "verify" && p_star - c.epsilon < 1.0) reject("invalid_value", "epsilon", "epsilon must be <= p* - 1");
  if (cmd == "bracket" && !(c.s >= 1.0 && c.s < c.q)) reject("invalid_value", "s", "bracket needs 1 <= s < q");
  if (cmd == "plot" && c.input.empty()) reject("missing_value", "input", "plot needs --input <sweep.csv>");
  if (c.refine == 1 || c.refine < 0) reject("invalid_value", "refine", "refine must be 0 or >= 2 levels");
  if (cmd == "analytic") {
    if (c.quantity == "torsion-ball" && !(c.r >= 0.0 && c.r <= c.radius)) {
      reject("invalid_value", "r", "r must lie in [0, radius]");
    }
    if (c.quantity == "talenti" && (!(c.a > 0.0) || !(c.b > 0.0) || !(c.r >= 0.0))) {
      reject("invalid_value", "b", "talenti needs a > 0, b > 0, r >= 0");
    }
  }

  if (c.output_dir.empty()) {
    const char* env = std::getenv("SOBOLEV_LAB_OUT");
    c.output_dir = env && *env ? env : "sobolev_out";
  }
}

}  // namespace

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

RunConfig parse_config(const std::vector<std::string>& args, std::string* help_text) {
  RunConfig c;
  CLI::App app{"Best Sobolev constants of bounded domains", "sobolev_lab"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.set_config("--config", "", "File of `key = value` lines; flags override it");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1, 1);

  app.add_option("--preset", c.preset, "Named configuration")->check(CLI::IsMember({"unit-ball-p2"}));
  app.add_option("--p", c.p, "Exponent p, 1 < p < n");
  app.add_option("--n", c.n, "Dimension n >= 2");
  app.add_option("--domain", c.domain, "ball, grid-ball, box or file")
      ->check(CLI::IsMember({"ball", "grid-ball", "box", "file"}));
  app.add_option("--radius", c.radius, "Ball radius");
  app.add_option("--mesh", c.mesh, "Radial elements");
  app.add_option("--h", c.h, "Grid width");
  app.add_option("--box", c.box, "Box side lengths")->delimiter(',');
  app.add_option("--domain-file", c.domain_file, "JSON domain descriptor");
  app.add_option("--q", c.q, "Exponent q in [1, p*]");
  app.add_option("--q-grid", c.q_grid, "default, uniform or list")
      ->check(CLI::IsMember({"default", "uniform", "list"}));
  app.add_option("--q-list", c.q_list, "Explicit q values")->delimiter(',');
  app.add_option("--q-points", c.q_points, "Grid points");
  app.add_option("--q-min", c.q_min, "First q of a uniform grid");
  app.add_option("--q-max", c.q_max, "Last q (default p* - q-margin)");
  app.add_option("--q-margin", c.q_margin, "Distance of the last default-grid point from p*");
  app.add_option("--max-iterations", c.max_iterations, "Solver iteration cap");
  app.add_option("--tolerance", c.tolerance, "Relative decrease tolerance");
  app.add_option("--gradient-tolerance", c.gradient_tolerance, "Relative gradient tolerance");
  app.add_option("--seed-profile", c.seed_profile, "w1 or torsion")->check(CLI::IsMember({"w1", "torsion"}));
  app.add_flag("--cold-start", c.cold_start, "Sweep without warm starts");
  app.add_option("--threads", c.threads, "Worker threads");
  app.add_option("--refine", c.refine, "Refinement levels for Richardson extrapolation");
  app.add_option("--epsilon", c.epsilon, "Distance from p* for the uniform constants");
  app.add_option("--s", c.s, "Lower exponent for bracket");
  app.add_option("--seed", c.seed, "Seed for randomized checks");
  app.add_option("--a", c.a, "Talenti amplitude");
  app.add_option("--b", c.b, "Talenti concentration");
  app.add_option("--r", c.r, "Evaluation radius");
  app.add_option("--input", c.input, "Sweep CSV for plot");
  app.add_option("--out", c.output_dir, "Output directory (default $SOBOLEV_LAB_OUT or sobolev_out)");
  app.add_option("--formats", c.formats, "Subset of csv,json,svg")
      ->delimiter(',')
      ->check(CLI::IsMember({"csv", "json", "svg"}));

  CLI::App* analytic = app.add_subcommand("analytic", "Closed-form quantities");
  analytic->fallthrough();
  analytic->require_subcommand(1, 1);
  for (const auto& name : kAnalyticQuantities) analytic->add_subcommand(name)->fallthrough();
  const std::map<std::string, std::string> help{
      {"solve", "Minimize the Rayleigh quotient at one q"},
      {"torsion", "Solve the torsion problem"},
      {"sweep", "Solve over a q grid"},
      {"verify", "Sweep and check every inequality"},
      {"bracket", "Left-continuity bracket at (s, q)"},
      {"plot", "SVG curves from a sweep CSV"}};
  for (const auto& name : kCommands) app.add_subcommand(name, help.at(name))->fallthrough();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    if (help_text) *help_text = app.help();
    return RunConfig{};
  } catch (const CLI::CallForAllHelp&) {
    if (help_text) *help_text = app.help("", CLI::AppFormatMode::All);
    return RunConfig{};
  } catch (const CLI::ExtrasError& e) {
    reject("unknown_key", offending_key(e.what()), e.what());
  } catch (const CLI::ConfigError& e) {
    reject("unknown_key", offending_key(e.what()), e.what());
  } catch (const CLI::RequiredError& e) {
    reject("missing_value", "command", e.what());
  } catch (const CLI::ParseError& e) {
    reject("invalid_value", offending_key(e.what()), e.what());
  }

  for (CLI::App* sub : app.get_subcommands()) {
    c.command = sub->get_name();
    if (sub == analytic) c.quantity = analytic->get_subcommands().front()->get_name();
  }
  apply_preset(c, app);
  validate(c);
  return c;
}

std::string config_json(const RunConfig& c) {
  nlohmann::ordered_json j{{"command", c.command},
                           {"quantity", c.quantity},
                           {"preset", c.preset},
                           {"p", c.p},
                           {"n", c.n},
                           {"domain", c.domain},
                           {"radius", c.radius},
                           {"mesh", c.mesh},
                           {"h", c.h},
                           {"box", c.box},
                           {"domain_file", c.domain_file},
                           {"q", c.q},
                           {"q_grid", c.q_grid},
                           {"q_list", c.q_list},
                           {"q_points", c.q_points},
                           {"q_min", c.q_min},
                           {"q_max", c.q_max},
                           {"q_margin", c.q_margin},
                           {"max_iterations", c.max_iterations},
                           {"tolerance", c.tolerance},
                           {"gradient_tolerance", c.gradient_tolerance},
                           {"seed_profile", c.seed_profile},
                           {"cold_start", c.cold_start},
                           {"threads", c.threads},
                           {"refine", c.refine},
                           {"epsilon", c.epsilon},
                           {"s", c.s},
                           {"seed", c.seed},
                           {"a", c.a},
                           {"b", c.b},
                           {"r", c.r},
                           {"input", c.input},
                           {"output_dir", c.output_dir},
                           {"formats", c.formats}};
  return j.dump(2) + "\n";
}

std::string config_hash(const RunConfig& config) {
  RunConfig copy = config;
  copy.output_dir.clear();
  return io::hash_hex(io::fnv1a(config_json(copy)));
}

}  // namespace sobolev::cli
