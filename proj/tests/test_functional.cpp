#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "sobolev/error.hpp"
#include "sobolev/functional.hpp"

using namespace sobolev;

namespace {

const Parameters kP23(2.0, 3);

double eigenfunction(double r) {
  const double c = 1.0 / std::sqrt(2.0 * M_PI);
  return r < 1e-12 ? M_PI * c : std::sin(M_PI * r) / r * c;
}

DiscreteField random_radial(const Domain& d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const double a = coef(rng), b = coef(rng), c = 3.0 * std::abs(coef(rng));
  return DiscreteField::from_radial(d, [&](double r) {
    return (1.0 - r * r) * (1.0 + a * r + b * std::cos(c * r)) + 0.05 * a * std::sin(7 * r) * (1 - r);
  });
}

}  // namespace

TEST_CASE("norms of the linear eigenfunction") {
  const Domain d = Domain::radial_ball(3, 1.0, 2048);
  const auto w = DiscreteField::from_radial(d, eigenfunction);
  CHECK(ls_norm(w, 2.0) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(ls_norm(w, 1.0) == doctest::Approx(4.0 / std::sqrt(2.0 * M_PI)).epsilon(1e-6));
  CHECK(sup_norm(w) == doctest::Approx(std::sqrt(M_PI / 2.0)).epsilon(1e-12));
  CHECK(rayleigh(w, QExponent(2.0, kP23), kP23) == doctest::Approx(M_PI * M_PI).epsilon(1e-5));
}

TEST_CASE("weighted sample norms") {
  WeightedSamples s{{2.0, 2.0, 2.0}, {1.0, 0.5, 0.5}, 2.0};
  CHECK(ls_norm(s, 1.0) == doctest::Approx(4.0));
  CHECK(ls_norm(s, 3.0) == doctest::Approx(2.0 * std::cbrt(2.0)));
  CHECK_THROWS_AS(ls_norm(s, 0.5), InvalidArgument);
  // constant field: Jensen equality
  CHECK(entropy_K(s, 2.5) == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("Rayleigh quotient is zero-homogeneous") {
  const Domain d = Domain::radial_ball(3, 1.0, 256);
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = random_radial(d, rng);
    const double c = std::exp(std::uniform_real_distribution<double>(-3, 3)(rng));
    for (double q : {1.0, 3.0, 6.0}) {
      const QExponent qe(q, kP23);
      CHECK(rayleigh(u.scaled(c), qe, kP23) == doctest::Approx(rayleigh(u, qe, kP23)).epsilon(1e-12));
      CHECK(rayleigh(u.scaled(-c), qe, kP23) == doctest::Approx(rayleigh(u, qe, kP23)).epsilon(1e-12));
    }
  }
}

TEST_CASE("zero field is degenerate") {
  const Domain d = Domain::radial_ball(3, 1.0, 16);
  const DiscreteField z(d, std::vector<double>(16, 0.0));
  CHECK_THROWS_AS(rayleigh(z, QExponent(2.0, kP23), kP23), DegenerateInput);
  CHECK_THROWS_AS(entropy_K(z, 2.0), DegenerateInput);
  CHECK(dirichlet_energy(z, kP23) == 0.0);
}

TEST_CASE("entropy is nonnegative on random fields") {
  const Domain d = Domain::radial_ball(3, 1.0, 128);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> t(1.0, 6.0);
  for (int trial = 0; trial < 200; ++trial) {
    const auto u = random_radial(d, rng);
    CHECK(entropy_K(u, t(rng)) >= -1e-9);
  }
  CHECK_THROWS_AS(entropy_K(random_radial(d, rng), 0.5), InvalidArgument);
}

TEST_CASE("exponential identity holds for random fields and exponents") {
  const Domain d = Domain::radial_ball(3, 1.0, 128);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> s(1.0, 6.0);
  for (int trial = 0; trial < 40; ++trial) {
    const auto u = random_radial(d, rng);
    double s1 = s(rng), s2 = s(rng);
    if (s1 > s2) std::swap(s1, s2);
    if (s2 - s1 < 1e-6) continue;
    const IdentityCheck c = identity_check(u, s1, s2, kP23);
    CHECK(c.relative_residual <= 1e-8);
    CHECK(c.entropy_integral >= 0.0);
    // K >= 0, so |Omega|^{p/s} R_s(u) is nonincreasing in s for fixed u
    CHECK(c.lhs >= c.rhs / std::exp(2.0 * c.entropy_integral) * (1 - 1e-8));
  }
}

TEST_CASE("identity check on grid domains") {
  const Domain d = Domain::grid_from_predicate(2, 0.05, {-1, -1, 0}, {1, 1, 0},
                                               [](const auto& x) { return x[0] * x[0] + x[1] * x[1] < 1.0; });
  const Parameters params(1.5, 2);
  const auto u = DiscreteField::from_point(d, [](const auto& x) {
    return std::max(0.0, 1.0 - x[0] * x[0] - x[1] * x[1]) * (1.2 + x[0]);
  });
  const IdentityCheck c = identity_check(u, 1.2, 5.5, params);
  CHECK(c.relative_residual <= 1e-8);
}

TEST_CASE("identity check argument validation") {
  const Domain d = Domain::radial_ball(3, 1.0, 32);
  const auto u = DiscreteField::from_radial(d, [](double r) { return 1 - r; });
  CHECK_THROWS_AS(identity_check(u, 3.0, 2.0, kP23), InvalidArgument);
  CHECK_THROWS_AS(identity_check(u, 0.5, 2.0, kP23), InvalidArgument);
  CHECK_THROWS_AS(identity_check(u, 2.0, 6.5, kP23), InvalidArgument);
}

TEST_CASE("continuity bracket") {
  const Domain d = Domain::radial_ball(3, 1.0, 1024);
  const auto w = DiscreteField::from_radial(d, eigenfunction);
  const QExponent q(2.0, kP23);
  const double lambda2 = rayleigh(w, q, kP23);
  const ContinuityBracket b = continuity_bracket(w, q, 1.8, lambda2, kP23);
  CHECK(b.lower == doctest::Approx(d.volume() * lambda2));
  CHECK(b.upper > b.lower);
  CHECK(b.m_q == doctest::Approx(std::log(2.0 * std::sqrt(d.volume()) * sup_norm(w) / ls_norm(w, 2.0))));

  const auto spike = DiscreteField::from_radial(d, [](double r) { return std::exp(-400.0 * r * r) - std::exp(-400.0); });
  CHECK_THROWS_AS(continuity_bracket(spike, QExponent(6.0, kP23), 1.0, 1.0, kP23), OutOfRegime);
  CHECK_THROWS_AS(continuity_bracket(w, q, 2.0, lambda2, kP23), InvalidArgument);
}
