#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace sobolev::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kConfigError = 2,
  kNonConvergence = 3,
  kVerificationFailure = 4,
};

// Bad flag, key or value. `kind` is one of unknown_key, invalid_value,
// parameter_violation, q_out_of_range, missing_value, out_of_regime, io.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string kind, std::string key, const std::string& message)
      : std::runtime_error(message), kind_(std::move(kind)), key_(std::move(key)) {}
  const std::string& kind() const { return kind_; }
  const std::string& key() const { return key_; }

 private:
  std::string kind_;
  std::string key_;
};

struct RunConfig {
  std::string command;   // analytic, solve, torsion, sweep, verify, bracket, plot
  std::string quantity;  // analytic subcommand
  std::string preset;

  double p = 2.0;
  int n = 3;

  std::string domain = "ball";  // ball, grid-ball, box, file
  double radius = 1.0;
  int mesh = 1024;
  double h = 0.05;
  std::vector<double> box{1.0, 1.0, 1.0};
  std::string domain_file;

  double q = 2.0;
  std::string q_grid = "default";  // default, uniform, list
  std::vector<double> q_list;
  int q_points = 20;
  double q_min = 1.0;
  double q_max = 0.0;  // 0: p* - q_margin
  double q_margin = 0.05;

  int max_iterations = 200000;
  double tolerance = 1e-10;
  double gradient_tolerance = 1e-8;
  std::string seed_profile = "w1";  // w1, torsion
  bool cold_start = false;
  int threads = 1;
  int refine = 0;

  double epsilon = 0.0;  // required by verify unless a preset sets it
  double s = 0.0;        // bracket
  std::uint64_t seed = 20240611;

  double a = 1.0;  // Talenti amplitude
  double b = 1.0;  // Talenti concentration
  double r = 0.0;  // evaluation radius for profiles

  std::string input;  // plot: sweep CSV
  std::string output_dir;
  std::vector<std::string> formats{"csv", "json", "svg"};

  bool wants(const std::string& format) const;
};

// Parses arguments (without the program name). A `--config FILE` of
// `key = value` lines supplies defaults that flags override. Throws
// ConfigError. Returns with command empty when help was requested.
RunConfig parse_config(const std::vector<std::string>& args, std::string* help_text = nullptr);

std::string config_json(const RunConfig& config);
// FNV-1a of the effective config without the output directory.
std::string config_hash(const RunConfig& config);

int execute(const RunConfig& config, std::ostream& out, std::ostream& err);

// parse_config + execute with error records; the program entry point.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sobolev::cli
