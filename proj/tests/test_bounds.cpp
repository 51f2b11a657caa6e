#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "sobolev/analytic.hpp"
#include "sobolev/bounds.hpp"
#include "sobolev/error.hpp"
#include "sobolev/functional.hpp"

using namespace sobolev;

namespace {

const Parameters kP23(2.0, 3);

double eigenfunction(double r) {
  const double c = 1.0 / std::sqrt(2.0 * M_PI);
  return r < 1e-12 ? M_PI * c : std::sin(M_PI * r) / r * c;
}

const SweepResult& unit_ball_sweep() {
  static const SweepResult s = run_sweep(Domain::radial_ball(3, 1.0, 1024), kP23, default_q_grid(kP23, 20), {});
  return s;
}

const SweepResult& small_sweep() {
  static const SweepResult s = run_sweep(Domain::radial_ball(3, 1.0, 256), kP23, default_q_grid(kP23, 8), {});
  return s;
}

}  // namespace

TEST_CASE("C_q") {
  // 25-digit evaluation with S^2 = 5.4779040895313...
  CHECK(c_q(QExponent(2.0, kP23), M_PI * M_PI, kP23) == doctest::Approx(0.0105855147920984).epsilon(1e-12));
  CHECK(c_q(QExponent(6.0, kP23), analytic::sobolev_constant_pth_power(kP23), kP23) ==
        doctest::Approx(0.0256).epsilon(1e-14));
  CHECK_THROWS_AS(c_q(QExponent(2.0, kP23), 0.0, kP23), InvalidArgument);
  CHECK_THROWS_AS(c_q(QExponent(2.0, kP23), -1.0, kP23), InvalidArgument);
}

TEST_CASE("level-set estimate on the linear eigenfunction") {
  const Domain d = Domain::radial_ball(3, 1.0, 2048);
  const auto w = DiscreteField::from_radial(d, eigenfunction);
  const DiscreteField wn = w.scaled(1.0 / ls_norm(w, 2.0));
  const LevelSetCheck c = level_set_bound_check(wn, QExponent(2.0, kP23), 1.0, M_PI * M_PI, kP23);
  CHECK(c.lhs == doctest::Approx(0.002345292057134).epsilon(1e-5));
  CHECK(c.rhs == doctest::Approx(1.595769121605731).epsilon(1e-5));
  CHECK(c.pass);
  const LevelSetCheck at_q = level_set_bound_check(wn, QExponent(2.0, kP23), 2.0, M_PI * M_PI, kP23);
  CHECK(at_q.rhs == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(at_q.lhs < 1.0);
  CHECK_THROWS_AS(level_set_bound_check(wn.scaled(2.0), QExponent(2.0, kP23), 1.0, M_PI * M_PI, kP23),
                  InvalidArgument);
  CHECK_THROWS_AS(level_set_bound_check(wn.scaled(-1.0), QExponent(2.0, kP23), 1.0, M_PI * M_PI, kP23),
                  InvalidArgument);
  CHECK_THROWS_AS(level_set_bound_check(wn, QExponent(2.0, kP23), 0.5, M_PI * M_PI, kP23), InvalidArgument);
}

TEST_CASE("L-infinity bounds") {
  const Domain d = Domain::radial_ball(3, 1.0, 2048);
  const DiscreteField w = DiscreteField::from_radial(d, eigenfunction);
  ConstantsLedger ledger = build_ledger(unit_ball_sweep(), 0.5);
  const LinfCheck c = linf_bounds_check(w, QExponent(2.0, kP23), ledger, kP23);
  CHECK(c.lower == doctest::Approx(0.48860251190292).epsilon(1e-12));
  CHECK(c.sup_norm == doctest::Approx(1.2533141373155).epsilon(1e-12));
  CHECK(c.lower_pass);
  CHECK(c.upper_pass);
  CHECK_THROWS_AS(linf_bounds_check(w, QExponent(5.8, kP23), ledger, kP23), OutOfRegime);
}

TEST_CASE("ledger consistency") {
  for (double eps : {1.0, 0.5, 0.25}) {
    const ConstantsLedger l = build_ledger(unit_ball_sweep(), eps);
    CHECK(l.c_eps == std::max(l.a_tilde, l.b_tilde_eps));
    CHECK(l.d_eps == std::max(l.a_const, l.b_eps));
    for (double v : {l.a_tilde, l.b_tilde_eps, l.a_const, l.b_eps, l.log_l_eps, l.lambda1_hat}) {
      CHECK(std::isfinite(v));
      CHECK(v > 0.0);
    }
    CHECK(l.c_q_samples.size() == 20);
    CHECK(d_epsilon(eps, unit_ball_sweep()) == l.d_eps);
  }
}

TEST_CASE("D_eps grows as eps shrinks") {
  const double d1 = d_epsilon(1.0, unit_ball_sweep());
  const double d05 = d_epsilon(0.5, unit_ball_sweep());
  const double d025 = d_epsilon(0.25, unit_ball_sweep());
  CHECK(d05 >= d1);
  CHECK(d025 >= d05);
}

TEST_CASE("D_eps regression anchor: unit ball, m = 1024, 20-point default grid, eps = 1") {
  const ConstantsLedger l = build_ledger(unit_ball_sweep(), 1.0);
  CHECK(l.a_const == doctest::Approx(4194.1018419997763).epsilon(1e-6));
  CHECK(l.d_eps == doctest::Approx(1.4841242347885247e30).epsilon(1e-5));
}

TEST_CASE("ledger needs coverage") {
  const Domain d = Domain::radial_ball(3, 1.0, 64);
  const SweepResult late = run_sweep(d, kP23, {2.5, 3.0, 4.0}, {});
  CHECK_THROWS_AS(build_ledger(late, 0.5), InsufficientData);
  const SweepResult low = run_sweep(d, kP23, {1.0, 1.5}, {});
  CHECK_THROWS_AS(build_ledger(low, 0.5), InsufficientData);
  CHECK_THROWS_AS(build_ledger(small_sweep(), 0.0), InvalidArgument);
  CHECK_THROWS_AS(build_ledger(small_sweep(), 5.5), InvalidArgument);
}

TEST_CASE("H and its continuous extension") {
  CHECK(lipschitz_h(1.0, 7.5) == 7.5);
  for (double a : {0.5, 3.0, 40.0, 8000.0}) {
    for (double xi : {1.0 + 1e-6, 1.0 - 1e-6}) {
      const double s = lipschitz_h(xi, a, HBranch::series);
      const double c = lipschitz_h(xi, a, HBranch::closed_form);
      CHECK(s == doctest::Approx(c).epsilon(1e-9));
    }
  }
  CHECK(lipschitz_h(2.0, 3.0) == doctest::Approx(7.0));
  CHECK(lipschitz_h(3.0, 2.0) == doctest::Approx(4.0));
  CHECK(log_lipschitz_h(2.0, 3.0) == doctest::Approx(std::log(7.0)));
  // far beyond double range, log stays finite
  CHECK(std::isinf(lipschitz_h(5.5, 1e4)));
  CHECK(log_lipschitz_h(5.5, 1e4) == doctest::Approx(1e4 * std::log(5.5) - std::log(4.5)).epsilon(1e-12));
  CHECK_THROWS_AS(lipschitz_h(0.0, 2.0), InvalidArgument);
}

TEST_CASE("H is increasing when a > 1") {
  double prev = lipschitz_h(1.0, 4.0);
  for (double xi = 1.05; xi <= 5.5; xi += 0.05) {
    const double h = lipschitz_h(xi, 4.0);
    CHECK(h > prev);
    prev = h;
  }
}

TEST_CASE("Lipschitz constant") {
  const LipschitzConstant big = lipschitz_constant(0.5, 10.0, kP23);
  CHECK(big.log_l_eps == doctest::Approx(log_lipschitz_h(5.5, 20.0)));
  CHECK(big.l_eps == doctest::Approx(lipschitz_h(5.5, 20.0)));
  const LipschitzConstant small = lipschitz_constant(0.5, 0.25, kP23);
  CHECK(small.l_eps == doctest::Approx(0.5));
  CHECK_THROWS_AS(lipschitz_constant(0.0, 1.0, kP23), InvalidArgument);
  CHECK_THROWS_AS(lipschitz_constant(0.5, -1.0, kP23), InvalidArgument);
  CHECK_THROWS_AS(lipschitz_constant(5.5, 1.0, kP23), InvalidArgument);
}

TEST_CASE("verify_all on a converged sweep") {
  const VerificationReport r = verify_all(small_sweep(), 0.5);
  CHECK(r.pass);
  CHECK_FALSE(r.vacuous);
  CHECK(r.has_ledger);
  CHECK(r.failures() == 0);
  CHECK(r.first_failure() == nullptr);
  for (const auto& item : r.items) CHECK(item.slack >= -item.tolerance);
}

TEST_CASE("empty sweep fails by vacuity") {
  SweepResult empty = small_sweep();
  empty.q_grid.clear();
  empty.lambda_hat.clear();
  empty.scaled_lambda.clear();
  empty.stats.clear();
  empty.extremals.clear();
  const VerificationReport r = verify_all(empty, 0.5);
  CHECK(r.vacuous);
  CHECK_FALSE(r.pass);
  CHECK(r.items.empty());
}

TEST_CASE("fault injection is pinpointed") {
  SweepResult bad = small_sweep();
  bad.lambda_hat[4] *= 1.5;
  const VerificationReport r = verify_all(bad, 0.5);
  CHECK_FALSE(r.pass);
  const VerificationItem* f = r.first_failure();
  REQUIRE(f != nullptr);
  CHECK(f->name.find("monotonicity") == 0);
  std::ostringstream q;
  q.precision(6);
  q << bad.q_grid[4];
  CHECK(f->name.find("->" + q.str()) != std::string::npos);
  std::size_t mono_failures = 0;
  for (const auto& item : r.items) mono_failures += !item.pass && item.name.find("monotonicity") == 0;
  CHECK(mono_failures == 1);
}

TEST_CASE("upstream errors become failed items") {
  SweepResult late = run_sweep(Domain::radial_ball(3, 1.0, 64), kP23, {2.0, 3.0, 4.0}, {});
  const VerificationReport r = verify_all(late, 0.5);
  CHECK_FALSE(r.pass);
  bool ledger_item = false;
  for (const auto& item : r.items) ledger_item = ledger_item || (item.name == "constants ledger" && !item.pass);
  CHECK(ledger_item);
}
