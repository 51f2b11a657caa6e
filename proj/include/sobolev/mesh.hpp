#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace sobolev {

// Gradients of the local P1 basis functions of one element, in physical units.
struct ElementShape {
  std::array<std::array<double, 3>, 4> grad{};
};

// A P1 simplex. `nodes` holds interior unknown indices; -1 marks a Dirichlet
// boundary vertex (value identically zero) or an unused slot.
struct Element {
  std::array<int, 4> nodes{-1, -1, -1, -1};
  int shape = 0;
  double weight = 0.0;  // measure of the element (radial: N*omega_N*int r^{N-1} dr)
};

// Quadrature point whose value is ca*u[a] + cb*u[b] (index -1 contributes 0).
struct QuadPoint {
  int a = -1;
  int b = -1;
  double ca = 0.0;
  double cb = 0.0;
  double weight = 0.0;
};

struct Incidence {
  int item = 0;
  int local = 0;  // local vertex index, or which of (a, b) for quadrature points
};

// Conforming P1 discretization shared by the radial and grid domains.
// The energy int |grad u|^p is exact per element; integrals of nonlinear
// functions of u use the quadrature points.
struct Mesh {
  int grad_dim = 1;           // 1 for radial meshes, N for grid meshes
  int nodes_per_element = 2;  // 2 for radial, N+1 for grid simplices
  int n_interior = 0;
  std::vector<Element> elements;
  std::vector<ElementShape> shapes;
  std::vector<QuadPoint> points;
  double point_mass = 0.0;  // sum of quadrature weights

  // node -> incident elements / quadrature points (CSR), used by gather kernels
  std::vector<int> element_offsets;
  std::vector<Incidence> element_incidence;
  std::vector<int> point_offsets;
  std::vector<Incidence> point_incidence;
};

// Radial mesh on nodes 0 = r_0 < ... < r_m = R for dimension n_dim. Node m is
// the boundary; the first `gauss_points` Gauss-Legendre points per element
// carry the weight N*omega_N*r^{N-1}.
Mesh build_radial_mesh(int n_dim, std::span<const double> radii);

struct GridGeometry {
  int n_dim = 2;
  std::array<int, 3> cells{1, 1, 1};
  double h = 1.0;
  std::array<double, 3> origin{0.0, 0.0, 0.0};
};

// Kuhn-simplex triangulation of the masked cells. `node_to_interior` maps the
// lattice node index to the unknown index (or -1) and is filled by the call.
Mesh build_grid_mesh(const GridGeometry& geometry, std::span<const std::uint8_t> mask,
                     std::vector<int>& node_to_interior);

// Gauss-Legendre rule on [0, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule gauss_legendre_unit(int n);

}  // namespace sobolev
