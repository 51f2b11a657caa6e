#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <string>

#include <json.hpp>

#include "sobolev/error.hpp"
#include "sobolev/io.hpp"
#include "sobolev/svg_plot.hpp"

using namespace sobolev;

namespace {

const Parameters kP23(2.0, 3);

const SweepResult& tiny_sweep() {
  static const SweepResult s = run_sweep(Domain::radial_ball(3, 1.0, 128), kP23, {1.0, 2.0, 3.5}, {});
  return s;
}

std::size_t count(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

}  // namespace

TEST_CASE("format_real round-trips doubles") {
  for (double v : {0.0, 1.0, M_PI, 1e-300, 6.02214076e23, -2.5, 0.1, std::nextafter(1.0, 2.0)}) {
    CHECK(std::strtod(io::format_real(v).c_str(), nullptr) == v);
  }
  CHECK(io::format_real(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(io::format_real(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(io::format_real(std::nan("")) == "nan");
}

TEST_CASE("FNV-1a 64-bit reference values") {
  CHECK(io::fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::fnv1a("foobar") == 0x85944171f73967e8ULL);
  CHECK(io::hash_hex(0xaf63dc4c8601ec8cULL) == "af63dc4c8601ec8c");
  CHECK(io::hash_hex(1) == "0000000000000001");
}

TEST_CASE("sweep CSV layout and round trip") {
  const std::string csv = io::sweep_csv(tiny_sweep(), "deadbeef");
  CHECK(csv.rfind("# config_hash=deadbeef\nq,lambda_hat,scaled_lambda,sup_norm,l1_norm,iterations,converged\n", 0) == 0);
  CHECK(count(csv, "\n") == 2 + tiny_sweep().size());
  const io::SweepTable t = io::read_sweep_csv(csv);
  REQUIRE(t.q.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(t.q[i] == tiny_sweep().q_grid[i]);
    CHECK(t.lambda_hat[i] == tiny_sweep().lambda_hat[i]);
    CHECK(t.scaled_lambda[i] == tiny_sweep().scaled_lambda[i]);
  }
}

TEST_CASE("read_sweep_csv rejects malformed input") {
  CHECK_THROWS_AS(io::read_sweep_csv(""), InvalidArgument);
  CHECK_THROWS_AS(io::read_sweep_csv("q,lambda_hat,scaled_lambda\n1,2\n"), InvalidArgument);
  CHECK_THROWS_AS(io::read_sweep_csv("x,y\n1,2\n"), InvalidArgument);
}

TEST_CASE("field CSV") {
  const Domain d = Domain::radial_ball(3, 1.0, 4);
  const DiscreteField u = DiscreteField::from_radial(d, [](double r) { return 1.0 - r * r; });
  const std::string csv = io::field_csv(u, "abc");
  CHECK(csv.rfind("# config_hash=abc\nr,value\n", 0) == 0);
  CHECK(csv.find("\n1,0\n") != std::string::npos);
  const Domain g = Domain::grid_from_predicate(2, 0.25, {0, 0, 0}, {1, 1, 0},
                                               [](const std::array<double, 3>&) { return true; });
  const std::string grid = io::field_csv(DiscreteField::from_point(g, [](const std::array<double, 3>&) { return 1.0; }), "abc");
  CHECK(grid.find("x,y,value\n") != std::string::npos);
}

TEST_CASE("JSON outputs parse and carry the hash") {
  const auto j = nlohmann::json::parse(io::sweep_json(tiny_sweep(), "h1"));
  CHECK(j["config_hash"] == "h1");
  CHECK(j["samples"].size() == 3);
  CHECK(j["params"]["p_star"].get<double>() == doctest::Approx(6.0));
  CHECK(j["samples"][1]["lambda_hat"].get<double>() == tiny_sweep().lambda_hat[1]);

  VerificationReport r = verify_all(tiny_sweep(), 0.5);
  const auto rj = nlohmann::json::parse(io::report_json(r, "h2"));
  CHECK(rj["config_hash"] == "h2");
  CHECK(rj["items"].size() == r.items.size());
  CHECK(rj["pass"].get<bool>() == r.pass);
  const std::string text = io::report_text(r);
  CHECK(text.find(r.pass ? "overall: PASS" : "overall: FAIL") != std::string::npos);
}

TEST_CASE("non-finite values become strings in JSON") {
  VerificationReport r;
  VerificationItem item;
  item.name = "x";
  item.lhs = std::numeric_limits<double>::infinity();
  item.rhs = std::nan("");
  r.items.push_back(item);
  const auto j = nlohmann::json::parse(io::report_json(r, "h"));
  CHECK(j["items"][0]["lhs"] == "inf");
  CHECK(j["items"][0]["rhs"] == "nan");
}

TEST_CASE("write_file creates directories") {
  const auto dir = std::filesystem::temp_directory_path() / "sobolev_io_test" / "nested";
  std::filesystem::remove_all(dir.parent_path());
  io::write_file(dir / "a.txt", "hello\n");
  CHECK(io::read_file(dir / "a.txt") == "hello\n");
  CHECK_THROWS(io::read_file(dir / "missing.txt"));
  std::filesystem::remove_all(dir.parent_path());
}

TEST_CASE("SVG rendering") {
  svg::Plot plot;
  plot.title = "lambda <q>";
  plot.x_label = "q";
  plot.y_label = "lambda";
  plot.comment = "config_hash=0123";
  plot.series.push_back({"a", {1, 2, 3}, {3, 2, 1}, "#d62728"});
  plot.series.push_back({"b", {1, 2, 3}, {1, 1.5, 2}});
  const std::string s = svg::render(plot);
  CHECK(s.rfind("<svg", 0) == 0);
  CHECK(s.find("<!-- config_hash=0123 -->") != std::string::npos);
  CHECK(count(s, "<polyline") == 2);
  CHECK(s.find("lambda &lt;q&gt;") != std::string::npos);
  CHECK(s.find("</svg>") != std::string::npos);
  plot.series[0].y.pop_back();
  CHECK_THROWS_AS(svg::render(plot), InvalidArgument);
}

TEST_CASE("nice ticks cover the range") {
  const auto t = svg::nice_ticks(0.13, 9.7);
  REQUIRE(t.size() >= 2);
  CHECK(t.front() <= 0.13);
  CHECK(t.back() >= 9.7);
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t[i] > t[i - 1]);
  const auto flat = svg::nice_ticks(2.0, 2.0);
  CHECK(flat.size() >= 2);
}
