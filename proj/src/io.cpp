#include "sobolev/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sobolev/error.hpp"

namespace sobolev::io {

using Json = nlohmann::ordered_json;

namespace {

Json real(double v) {
  if (std::isfinite(v)) return v;
  return format_real(v);
}

Json reals(const std::vector<double>& v) {
  Json out = Json::array();
  for (double x : v) out.push_back(real(x));
  return out;
}

Json params_json(const Parameters& params) {
  return Json{{"p", params.p()}, {"n", params.n_dim()}, {"p_star", params.critical_exponent()}};
}

std::string header_line(const std::string& config_hash) { return "# config_hash=" + config_hash + "\n"; }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, sep)) out.push_back(cell);
  return out;
}

}  // namespace

std::string format_real(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::uint64_t hash) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string field_csv(const DiscreteField& u, const std::string& config_hash) {
  const Domain& d = u.domain();
  const auto v = u.values();
  std::ostringstream out;
  out << header_line(config_hash);
  if (d.kind() == DomainKind::radial_ball) {
    out << "r,value\n";
    const auto radii = d.node_radii();
    for (std::size_t i = 0; i < v.size(); ++i) out << format_real(radii[i]) << ',' << format_real(v[i]) << '\n';
    out << format_real(radii.back()) << ",0\n";
  } else {
    out << (d.n_dim() == 2 ? "x,y,value\n" : "x,y,z,value\n");
    for (std::size_t i = 0; i < v.size(); ++i) {
      const auto x = d.interior_coordinate(static_cast<int>(i));
      for (int k = 0; k < d.n_dim(); ++k) out << format_real(x[k]) << ',';
      out << format_real(v[i]) << '\n';
    }
  }
  return out.str();
}

std::string sweep_csv(const SweepResult& sweep, const std::string& config_hash) {
  std::ostringstream out;
  out << header_line(config_hash);
  out << "q,lambda_hat,scaled_lambda,sup_norm,l1_norm,iterations,converged\n";
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const ExtremalStats& s = sweep.stats[i];
    out << format_real(sweep.q_grid[i]) << ',' << format_real(sweep.lambda_hat[i]) << ','
        << format_real(sweep.scaled_lambda[i]) << ',' << format_real(s.sup_norm) << ',' << format_real(s.l1_norm)
        << ',' << s.iterations << ',' << (s.converged ? 1 : 0) << '\n';
  }
  return out.str();
}

std::string sweep_json(const SweepResult& sweep, const std::string& config_hash) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const ExtremalStats& s = sweep.stats[i];
    rows.push_back(Json{{"q", sweep.q_grid[i]},
                        {"lambda_hat", real(sweep.lambda_hat[i])},
                        {"scaled_lambda", real(sweep.scaled_lambda[i])},
                        {"sup_norm", real(s.sup_norm)},
                        {"l1_norm", real(s.l1_norm)},
                        {"iterations", s.iterations},
                        {"converged", s.converged},
                        {"concentration_regime", s.concentration_regime}});
  }
  Json j{{"config_hash", config_hash},
         {"params", params_json(sweep.params)},
         {"domain", Json::parse(domain_to_json(sweep.domain))},
         {"volume", sweep.volume},
         {"mesh_size", sweep.mesh_size},
         {"samples", rows}};
  return j.dump(2) + "\n";
}

std::string solve_json(const SolveResult& r, const Parameters& params, const std::string& config_hash) {
  Json j{{"config_hash", config_hash},
         {"params", params_json(params)},
         {"q", r.q},
         {"lambda_hat", real(r.lambda_hat)},
         {"iterations", r.iterations},
         {"converged", r.converged},
         {"final_gradient_norm", real(r.final_gradient_norm)},
         {"mesh_size", r.mesh_size},
         {"concentration_regime", r.concentration_regime},
         {"trace", reals(r.trace)}};
  return j.dump(2) + "\n";
}

std::string torsion_json(const TorsionResult& r, const Parameters& params, const std::string& config_hash) {
  Json j{{"config_hash", config_hash},
         {"params", params_json(params)},
         {"functional_value", real(r.functional_value)},
         {"l1_norm", real(r.l1_norm)},
         {"lambda1_hat", real(r.lambda1_hat)},
         {"iterations", r.iterations},
         {"converged", r.converged},
         {"final_gradient_norm", real(r.final_gradient_norm)},
         {"mesh_size", r.mesh_size}};
  return j.dump(2) + "\n";
}

std::string report_json(const VerificationReport& report, const std::string& config_hash) {
  Json items = Json::array();
  for (const auto& item : report.items) {
    items.push_back(Json{{"name", item.name},
                         {"anchor", item.anchor},
                         {"lhs", real(item.lhs)},
                         {"rhs", real(item.rhs)},
                         {"slack", real(item.slack)},
                         {"tolerance", item.tolerance},
                         {"pass", item.pass},
                         {"note", item.note}});
  }
  Json j{{"config_hash", config_hash},
         {"epsilon", report.epsilon},
         {"pass", report.pass},
         {"vacuous", report.vacuous},
         {"failures", report.failures()},
         {"items", items}};
  if (report.has_ledger) {
    const ConstantsLedger& l = report.ledger;
    Json cq = Json::array();
    for (const auto& [q, c] : l.c_q_samples) cq.push_back(Json{{"q", q}, {"c_q", c}});
    j["ledger"] = Json{{"epsilon", l.epsilon},
                       {"volume", l.volume},
                       {"a_tilde", real(l.a_tilde)},
                       {"b_tilde_eps", real(l.b_tilde_eps)},
                       {"c_eps", real(l.c_eps)},
                       {"a_const", real(l.a_const)},
                       {"b_eps", real(l.b_eps)},
                       {"d_eps", real(l.d_eps)},
                       {"l_eps", real(l.l_eps)},
                       {"log_l_eps", real(l.log_l_eps)},
                       {"lambda1_hat", real(l.lambda1_hat)},
                       {"log_lipschitz_bound", real(l.log_lipschitz_bound)},
                       {"c_q_increasing", l.c_q_increasing},
                       {"c_q_samples", cq},
                       {"note", "suprema over q are maxima over sampled q; C_q uses lambda_hat >= lambda_q"}};
  }
  return j.dump(2) + "\n";
}

std::string report_text(const VerificationReport& report) {
  std::ostringstream out;
  char line[512];
  std::snprintf(line, sizeof line, "%-4s  %-52s  %-24s  %-24s  %-12s\n", "ok", "item", "lhs", "rhs", "slack");
  out << line;
  for (const auto& item : report.items) {
    std::snprintf(line, sizeof line, "%-4s  %-52s  %-24s  %-24s  %-12.4g%s%s\n", item.pass ? "PASS" : "FAIL",
                  item.name.c_str(), format_real(item.lhs).c_str(), format_real(item.rhs).c_str(), item.slack,
                  item.note.empty() ? "" : "  ", item.note.c_str());
    out << line;
  }
  if (report.has_ledger) {
    const ConstantsLedger& l = report.ledger;
    out << "epsilon=" << format_real(l.epsilon) << " C_eps=" << format_real(l.c_eps)
        << " D_eps=" << format_real(l.d_eps) << " log(L_eps)=" << format_real(l.log_l_eps) << '\n';
  }
  out << (report.vacuous ? "overall: FAIL (vacuous: no items)\n"
                         : report.pass ? "overall: PASS\n" : "overall: FAIL\n");
  out << report.failures() << " of " << report.items.size() << " items failed\n";
  return out.str();
}

SweepTable read_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::string> header;
  SweepTable table;
  int iq = -1, il = -1, is = -1;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto cells = split(line, ',');
    if (header.empty()) {
      header = cells;
      for (std::size_t k = 0; k < header.size(); ++k) {
        if (header[k] == "q") iq = static_cast<int>(k);
        if (header[k] == "lambda_hat") il = static_cast<int>(k);
        if (header[k] == "scaled_lambda") is = static_cast<int>(k);
      }
      if (iq < 0 || il < 0 || is < 0) throw InvalidArgument("read_sweep_csv: missing q/lambda_hat/scaled_lambda column");
      continue;
    }
    if (cells.size() != header.size()) throw InvalidArgument("read_sweep_csv: ragged row: " + line);
    try {
      table.q.push_back(std::stod(cells[iq]));
      table.lambda_hat.push_back(std::stod(cells[il]));
      table.scaled_lambda.push_back(std::stod(cells[is]));
    } catch (const std::logic_error&) {
      throw InvalidArgument("read_sweep_csv: bad number in row: " + line);
    }
  }
  if (header.empty()) throw InvalidArgument("read_sweep_csv: no header row");
  return table;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out << content;
}

}  // namespace sobolev::io
