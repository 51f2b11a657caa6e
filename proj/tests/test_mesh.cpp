#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "sobolev/core.hpp"
#include "sobolev/mesh.hpp"

using namespace sobolev;

TEST_CASE("Gauss-Legendre is exact to degree 2n-1") {
  for (int n = 1; n <= 8; ++n) {
    const GaussRule g = gauss_legendre_unit(n);
    REQUIRE(g.nodes.size() == static_cast<std::size_t>(n));
    for (int k = 0; k <= 2 * n - 1; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += g.weights[i] * std::pow(g.nodes[i], k);
      CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-14));
    }
  }
}

TEST_CASE("radial quadrature integrates r^k exactly") {
  const std::vector<double> radii{0.0, 0.1, 0.35, 0.6, 1.0};
  const Mesh m = build_radial_mesh(3, radii);
  CHECK(m.n_interior == 4);
  CHECK(m.point_mass == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
  double elements = 0.0;
  for (const auto& e : m.elements) elements += e.weight;
  CHECK(elements == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-14));
}

TEST_CASE("radial quadrature reproduces a linear interpolant") {
  // u = 1 - r on nodes; int_B (1 - r) dx = 4 pi (1/3 - 1/4)
  const Domain d = Domain::radial_ball(3, 1.0, 16);
  const Mesh& m = d.mesh();
  const auto radii = d.node_radii();
  std::vector<double> u(m.n_interior);
  for (int i = 0; i < m.n_interior; ++i) u[i] = 1.0 - radii[i];
  double s = 0.0;
  for (const auto& q : m.points) s += q.weight * ((q.a >= 0 ? q.ca * u[q.a] : 0.0) + (q.b >= 0 ? q.cb * u[q.b] : 0.0));
  CHECK(s == doctest::Approx(4.0 * M_PI / 12.0).epsilon(1e-13));
}

TEST_CASE("grid mesh: Kuhn simplices and lumped weights") {
  GridGeometry g;
  g.n_dim = 3;
  g.cells = {3, 3, 3};
  g.h = 0.5;
  std::vector<std::uint8_t> mask(27, 1);
  std::vector<int> map;
  const Mesh m = build_grid_mesh(g, mask, map);
  CHECK(m.elements.size() == 27u * 6u);
  CHECK(m.n_interior == 8);
  double vol = 0.0;
  for (const auto& e : m.elements) vol += e.weight;
  CHECK(vol == doctest::Approx(27 * 0.125));
  // lumped weights over interior nodes never exceed the volume
  CHECK(m.point_mass <= vol + 1e-12);
  CHECK(std::count_if(map.begin(), map.end(), [](int i) { return i >= 0; }) == 8);
}

TEST_CASE("grid mesh 2D counts") {
  GridGeometry g;
  g.n_dim = 2;
  g.cells = {5, 4, 1};
  g.h = 0.2;
  std::vector<std::uint8_t> mask(20, 1);
  std::vector<int> map;
  const Mesh m = build_grid_mesh(g, mask, map);
  CHECK(m.elements.size() == 40u);
  CHECK(m.n_interior == 4 * 3);
}

TEST_CASE("incidence lists cover every element vertex once") {
  const Domain d = Domain::grid_from_predicate(2, 0.1, {-1, -1, 0}, {1, 1, 0},
                                               [](const auto& x) { return x[0] * x[0] + x[1] * x[1] < 1.0; });
  const Mesh& m = d.mesh();
  std::size_t refs = 0;
  for (const auto& e : m.elements) {
    for (int k = 0; k < m.nodes_per_element; ++k) refs += e.nodes[k] >= 0;
  }
  CHECK(m.element_incidence.size() == refs);
  CHECK(m.element_offsets.size() == static_cast<std::size_t>(m.n_interior) + 1);
}
