#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sobolev/bounds.hpp"
#include "sobolev/solver.hpp"
#include "sobolev/sweep.hpp"

namespace sobolev::io {

// 17 significant digits; non-finite values as inf, -inf, nan.
std::string format_real(double value);

std::uint64_t fnv1a(std::string_view text);
std::string hash_hex(std::uint64_t hash);

// CSV files start with "# config_hash=<hash>" followed by the header row.
// Radial fields have columns r,value; grid fields x,y[,z],value.
std::string field_csv(const DiscreteField& u, const std::string& config_hash);
std::string sweep_csv(const SweepResult& sweep, const std::string& config_hash);
std::string sweep_json(const SweepResult& sweep, const std::string& config_hash);
std::string solve_json(const SolveResult& result, const Parameters& params, const std::string& config_hash);
std::string torsion_json(const TorsionResult& result, const Parameters& params, const std::string& config_hash);
std::string report_json(const VerificationReport& report, const std::string& config_hash);
std::string report_text(const VerificationReport& report);

struct SweepTable {
  std::vector<double> q;
  std::vector<double> lambda_hat;
  std::vector<double> scaled_lambda;
};
// Reads the columns q, lambda_hat, scaled_lambda of a sweep CSV.
SweepTable read_sweep_csv(const std::string& text);

std::string read_file(const std::filesystem::path& path);
// Creates parent directories.
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace sobolev::io
