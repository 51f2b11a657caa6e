#include "sobolev/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sobolev/core.hpp"
#include "sobolev/error.hpp"

namespace sobolev {

GaussRule gauss_legendre_unit(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre_unit: n must be >= 1");
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) {
        p1 = x;
        p0 = 1.0;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // map [-1, 1] -> [0, 1], ascending
    rule.nodes[n - 1 - i] = 0.5 * (x + 1.0);
    rule.weights[n - 1 - i] = 0.5 * w;
  }
  return rule;
}

namespace {

void build_incidence(Mesh& mesh) {
  const int n = mesh.n_interior;
  std::vector<int> count(n + 1, 0);
  for (const auto& e : mesh.elements) {
    for (int k = 0; k < mesh.nodes_per_element; ++k) {
      if (e.nodes[k] >= 0) ++count[e.nodes[k] + 1];
    }
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  mesh.element_offsets = count;
  mesh.element_incidence.resize(count.back());
  std::vector<int> fill(count.begin(), count.end() - 1);
  for (int ei = 0; ei < static_cast<int>(mesh.elements.size()); ++ei) {
    const auto& e = mesh.elements[ei];
    for (int k = 0; k < mesh.nodes_per_element; ++k) {
      if (e.nodes[k] >= 0) mesh.element_incidence[fill[e.nodes[k]]++] = {ei, k};
    }
  }

  std::vector<int> pcount(n + 1, 0);
  for (const auto& q : mesh.points) {
    if (q.a >= 0) ++pcount[q.a + 1];
    if (q.b >= 0) ++pcount[q.b + 1];
  }
  std::partial_sum(pcount.begin(), pcount.end(), pcount.begin());
  mesh.point_offsets = pcount;
  mesh.point_incidence.resize(pcount.back());
  std::vector<int> pfill(pcount.begin(), pcount.end() - 1);
  for (int pi = 0; pi < static_cast<int>(mesh.points.size()); ++pi) {
    const auto& q = mesh.points[pi];
    if (q.a >= 0) mesh.point_incidence[pfill[q.a]++] = {pi, 0};
    if (q.b >= 0) mesh.point_incidence[pfill[q.b]++] = {pi, 1};
  }

  mesh.point_mass = 0.0;
  for (const auto& q : mesh.points) mesh.point_mass += q.weight;
}

// Inverse of a small dense matrix (row-major, dim <= 3) by Gauss-Jordan.
std::array<std::array<double, 3>, 3> invert(std::array<std::array<double, 3>, 3> a, int dim) {
  std::array<std::array<double, 3>, 3> inv{};
  for (int i = 0; i < dim; ++i) inv[i][i] = 1.0;
  for (int col = 0; col < dim; ++col) {
    int pivot = col;
    for (int r = col + 1; r < dim; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    std::swap(a[col], a[pivot]);
    std::swap(inv[col], inv[pivot]);
    const double d = a[col][col];
    for (int c = 0; c < dim; ++c) {
      a[col][c] /= d;
      inv[col][c] /= d;
    }
    for (int r = 0; r < dim; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      for (int c = 0; c < dim; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

}  // namespace

Mesh build_radial_mesh(int n_dim, std::span<const double> radii) {
  const int m = static_cast<int>(radii.size()) - 1;
  const double omega = unit_ball_volume(n_dim);
  // Exact for (linear)^2 * r^{N-1}.
  const int ng = std::max(4, (n_dim + 3) / 2);
  const GaussRule rule = gauss_legendre_unit(ng);

  Mesh mesh;
  mesh.grad_dim = 1;
  mesh.nodes_per_element = 2;
  mesh.n_interior = m;  // nodes 0..m-1; node m is the boundary
  mesh.elements.resize(m);
  mesh.shapes.resize(m);
  mesh.points.reserve(static_cast<std::size_t>(m) * ng);
  for (int e = 0; e < m; ++e) {
    const double a = radii[e];
    const double b = radii[e + 1];
    const double h = b - a;
    Element& el = mesh.elements[e];
    el.nodes = {e, e + 1 < m ? e + 1 : -1, -1, -1};
    el.shape = e;
    el.weight = omega * (std::pow(b, n_dim) - std::pow(a, n_dim));
    mesh.shapes[e].grad[0][0] = -1.0 / h;
    mesh.shapes[e].grad[1][0] = 1.0 / h;
    for (int g = 0; g < ng; ++g) {
      const double t = rule.nodes[g];
      const double r = a + t * h;
      QuadPoint q;
      q.a = e;
      q.b = e + 1 < m ? e + 1 : -1;
      q.ca = 1.0 - t;
      q.cb = t;
      q.weight = n_dim * omega * std::pow(r, n_dim - 1) * h * rule.weights[g];
      mesh.points.push_back(q);
    }
  }
  build_incidence(mesh);
  return mesh;
}

Mesh build_grid_mesh(const GridGeometry& g, std::span<const std::uint8_t> mask,
                     std::vector<int>& node_to_interior) {
  const int dim = g.n_dim;
  const int cx = g.cells[0];
  const int cy = g.cells[1];
  const int cz = dim == 3 ? g.cells[2] : 1;
  const int nx = cx + 1;
  const int ny = cy + 1;
  const int nz = dim == 3 ? cz + 1 : 1;

  auto cell_in = [&](int i, int j, int k) {
    if (i < 0 || j < 0 || k < 0 || i >= cx || j >= cy || k >= cz) return false;
    return mask[(static_cast<std::size_t>(k) * cy + j) * cx + i] != 0;
  };

  node_to_interior.assign(static_cast<std::size_t>(nx) * ny * nz, -1);
  int n_interior = 0;
  for (int k = 0; k < nz; ++k) {
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        bool interior = true;
        const int kz_max = dim == 3 ? 1 : 0;
        for (int dk = 0; dk <= kz_max && interior; ++dk) {
          for (int dj = 0; dj <= 1 && interior; ++dj) {
            for (int di = 0; di <= 1 && interior; ++di) {
              interior = cell_in(i - di, j - dj, dim == 3 ? k - dk : 0);
            }
          }
        }
        if (interior) node_to_interior[(static_cast<std::size_t>(k) * ny + j) * nx + i] = n_interior++;
      }
    }
  }

  // Kuhn simplices: one per permutation of the axes.
  std::vector<std::array<int, 3>> perms;
  {
    std::array<int, 3> perm{0, 1, 2};
    do {
      perms.push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.begin() + dim));
  }
  Mesh mesh;
  mesh.grad_dim = dim;
  mesh.nodes_per_element = dim + 1;
  mesh.n_interior = n_interior;
  std::vector<std::array<std::array<int, 3>, 4>> offsets;
  for (const auto& perm : perms) {
    std::array<std::array<int, 3>, 4> verts{};
    for (int v = 0; v < dim; ++v) {
      verts[v + 1] = verts[v];
      verts[v + 1][perm[v]] += 1;
    }
    offsets.push_back(verts);
    std::array<std::array<double, 3>, 3> d{};
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) d[c][r] = (verts[r + 1][c] - verts[0][c]) * g.h;
    }
    const auto inv = invert(d, dim);
    ElementShape s;
    for (int k = 1; k <= dim; ++k) {
      for (int c = 0; c < dim; ++c) {
        s.grad[k][c] = inv[k - 1][c];
        s.grad[0][c] -= inv[k - 1][c];
      }
    }
    mesh.shapes.push_back(s);
  }
  double factorial = 1.0;
  for (int i = 2; i <= dim; ++i) factorial *= i;
  const double simplex_volume = std::pow(g.h, dim) / factorial;

  std::vector<double> lumped(n_interior, 0.0);
  for (int k = 0; k < cz; ++k) {
    for (int j = 0; j < cy; ++j) {
      for (int i = 0; i < cx; ++i) {
        if (!cell_in(i, j, k)) continue;
        for (std::size_t s = 0; s < offsets.size(); ++s) {
          Element el;
          el.shape = static_cast<int>(s);
          el.weight = simplex_volume;
          for (int v = 0; v <= dim; ++v) {
            const auto& o = offsets[s][v];
            const std::size_t node = (static_cast<std::size_t>(k + o[2]) * ny + (j + o[1])) * nx + (i + o[0]);
            el.nodes[v] = node_to_interior[node];
            if (el.nodes[v] >= 0) lumped[el.nodes[v]] += simplex_volume / (dim + 1);
          }
          mesh.elements.push_back(el);
        }
      }
    }
  }
  mesh.points.resize(n_interior);
  for (int i = 0; i < n_interior; ++i) {
    mesh.points[i] = QuadPoint{i, -1, 1.0, 0.0, lumped[i]};
  }
  build_incidence(mesh);
  return mesh;
}

}  // namespace sobolev
