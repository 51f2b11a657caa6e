#include "sobolev/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <omp.h>

namespace sobolev::kernels {

namespace {

constexpr std::size_t kBlock = 2048;

inline double node_value(std::span<const double> u, int i) { return i >= 0 ? u[i] : 0.0; }

inline std::array<double, 3> element_gradient(const Mesh& mesh, const Element& e, std::span<const double> u) {
  std::array<double, 3> g{0.0, 0.0, 0.0};
  const auto& shape = mesh.shapes[e.shape];
  for (int k = 0; k < mesh.nodes_per_element; ++k) {
    const int n = e.nodes[k];
    if (n < 0) continue;
    const double v = u[n];
    for (int d = 0; d < mesh.grad_dim; ++d) g[d] += v * shape.grad[k][d];
  }
  return g;
}

inline double norm2(const std::array<double, 3>& g, int dim) {
  double s = 0.0;
  for (int d = 0; d < dim; ++d) s += g[d] * g[d];
  return s;
}

// w |g|^{p-2} g, with the value 0 at g = 0.
inline std::array<double, 3> element_flux(const Mesh& mesh, const Element& e, double p, std::span<const double> u) {
  auto g = element_gradient(mesh, e, u);
  const double g2 = norm2(g, mesh.grad_dim);
  if (g2 == 0.0) return {0.0, 0.0, 0.0};
  const double scale = e.weight * std::pow(g2, 0.5 * (p - 2.0));
  for (int d = 0; d < mesh.grad_dim; ++d) g[d] *= scale;
  return g;
}

inline double element_energy(const Mesh& mesh, const Element& e, double p, std::span<const double> u) {
  const auto g = element_gradient(mesh, e, u);
  const double g2 = norm2(g, mesh.grad_dim);
  return g2 == 0.0 ? 0.0 : e.weight * std::pow(g2, 0.5 * p);
}

inline double point_value(const QuadPoint& q, std::span<const double> u) {
  return q.ca * node_value(u, q.a) + q.cb * node_value(u, q.b);
}

// |v|^{s-2} v, i.e. the derivative of |v|^s / s.
inline double power_derivative(double v, double s) {
  return std::copysign(std::pow(std::abs(v), s - 1.0), v);
}

template <typename F>
double blocked_sum(std::size_t n, int threads, F&& term) {
  const std::size_t blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> partial(blocks, 0.0);
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for schedule(static) num_threads(team)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += term(i);
    partial[b] = s;
  }
  double total = 0.0;
  for (double s : partial) total += s;
  return total;
}

}  // namespace

namespace serial {

double energy(const Mesh& mesh, double p, std::span<const double> u) {
  double total = 0.0;
  for (const auto& e : mesh.elements) total += element_energy(mesh, e, p, u);
  return total;
}

void energy_gradient(const Mesh& mesh, double p, std::span<const double> u, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& e : mesh.elements) {
    const auto flux = element_flux(mesh, e, p, u);
    const auto& shape = mesh.shapes[e.shape];
    for (int k = 0; k < mesh.nodes_per_element; ++k) {
      const int n = e.nodes[k];
      if (n < 0) continue;
      double s = 0.0;
      for (int d = 0; d < mesh.grad_dim; ++d) s += flux[d] * shape.grad[k][d];
      out[n] += s;
    }
  }
}

double power_sum(const Mesh& mesh, double s, std::span<const double> u) {
  double total = 0.0;
  for (const auto& q : mesh.points) {
    const double v = std::abs(point_value(q, u));
    if (v != 0.0) total += q.weight * std::pow(v, s);
  }
  return total;
}

void power_sum_gradient(const Mesh& mesh, double s, std::span<const double> u, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  for (const auto& q : mesh.points) {
    const double d = q.weight * power_derivative(point_value(q, u), s);
    if (q.a >= 0) out[q.a] += d * q.ca;
    if (q.b >= 0) out[q.b] += d * q.cb;
  }
}

EntropySums entropy_sums(const Mesh& mesh, double t, std::span<const double> u) {
  EntropySums sums;
  for (const auto& q : mesh.points) {
    const double v = std::abs(point_value(q, u));
    if (v == 0.0) continue;
    const double vt = std::pow(v, t);
    sums.power += q.weight * vt;
    sums.power_log += q.weight * vt * t * std::log(v);
  }
  return sums;
}

double sup_abs(std::span<const double> u) {
  double m = 0.0;
  for (double v : u) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace serial

namespace parallel {

double energy(const Mesh& mesh, double p, std::span<const double> u, int threads) {
  return blocked_sum(mesh.elements.size(), threads,
                     [&](std::size_t i) { return element_energy(mesh, mesh.elements[i], p, u); });
}

void energy_gradient(const Mesh& mesh, double p, std::span<const double> u, std::span<double> out, int threads) {
  const std::ptrdiff_t ne = static_cast<std::ptrdiff_t>(mesh.elements.size());
  std::vector<std::array<double, 3>> flux(mesh.elements.size());
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(team)
  {
#pragma omp for schedule(static)
    for (std::ptrdiff_t e = 0; e < ne; ++e) flux[e] = element_flux(mesh, mesh.elements[e], p, u);
#pragma omp for schedule(static)
    for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(mesh.n_interior); ++n) {
      double s = 0.0;
      for (int k = mesh.element_offsets[n]; k < mesh.element_offsets[n + 1]; ++k) {
        const auto& inc = mesh.element_incidence[k];
        const auto& e = mesh.elements[inc.item];
        const auto& grad = mesh.shapes[e.shape].grad[inc.local];
        for (int d = 0; d < mesh.grad_dim; ++d) s += flux[inc.item][d] * grad[d];
      }
      out[n] = s;
    }
  }
}

double power_sum(const Mesh& mesh, double s, std::span<const double> u, int threads) {
  return blocked_sum(mesh.points.size(), threads, [&](std::size_t i) {
    const auto& q = mesh.points[i];
    const double v = std::abs(point_value(q, u));
    return v != 0.0 ? q.weight * std::pow(v, s) : 0.0;
  });
}

void power_sum_gradient(const Mesh& mesh, double s, std::span<const double> u, std::span<double> out, int threads) {
  std::vector<double> dp(mesh.points.size());
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel num_threads(team)
  {
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(mesh.points.size()); ++i) {
      const auto& q = mesh.points[i];
      dp[i] = q.weight * power_derivative(point_value(q, u), s);
    }
#pragma omp for schedule(static)
    for (std::ptrdiff_t n = 0; n < static_cast<std::ptrdiff_t>(mesh.n_interior); ++n) {
      double acc = 0.0;
      for (int k = mesh.point_offsets[n]; k < mesh.point_offsets[n + 1]; ++k) {
        const auto& inc = mesh.point_incidence[k];
        const auto& q = mesh.points[inc.item];
        acc += dp[inc.item] * (inc.local == 0 ? q.ca : q.cb);
      }
      out[n] = acc;
    }
  }
}

EntropySums entropy_sums(const Mesh& mesh, double t, std::span<const double> u, int threads) {
  EntropySums sums;
  auto value = [&](std::size_t i) { return std::abs(point_value(mesh.points[i], u)); };
  sums.power = blocked_sum(mesh.points.size(), threads, [&](std::size_t i) {
    const double v = value(i);
    return v != 0.0 ? mesh.points[i].weight * std::pow(v, t) : 0.0;
  });
  sums.power_log = blocked_sum(mesh.points.size(), threads, [&](std::size_t i) {
    const double v = value(i);
    return v != 0.0 ? mesh.points[i].weight * std::pow(v, t) * t * std::log(v) : 0.0;
  });
  return sums;
}

double sup_abs(std::span<const double> u, int threads) {
  double m = 0.0;
  const int team = threads > 0 ? threads : omp_get_max_threads();
#pragma omp parallel for reduction(max : m) num_threads(team)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(u.size()); ++i) m = std::max(m, std::abs(u[i]));
  return m;
}

}  // namespace parallel

double Backend::energy(const Mesh& mesh, double p, std::span<const double> u) const {
  return threads > 1 ? parallel::energy(mesh, p, u, threads) : serial::energy(mesh, p, u);
}

void Backend::energy_gradient(const Mesh& mesh, double p, std::span<const double> u, std::span<double> out) const {
  if (threads > 1) {
    parallel::energy_gradient(mesh, p, u, out, threads);
  } else {
    serial::energy_gradient(mesh, p, u, out);
  }
}

double Backend::power_sum(const Mesh& mesh, double s, std::span<const double> u) const {
  return threads > 1 ? parallel::power_sum(mesh, s, u, threads) : serial::power_sum(mesh, s, u);
}

void Backend::power_sum_gradient(const Mesh& mesh, double s, std::span<const double> u,
                                 std::span<double> out) const {
  if (threads > 1) {
    parallel::power_sum_gradient(mesh, s, u, out, threads);
  } else {
    serial::power_sum_gradient(mesh, s, u, out);
  }
}

}  // namespace sobolev::kernels
