#pragma once

#include <span>

#include "sobolev/mesh.hpp"

// Discrete integrals over a Mesh. `serial` is the straightforward reference;
// `parallel` runs the same loops under OpenMP. The parallel reductions use a
// fixed block partition, so their results do not depend on the thread count.
namespace sobolev::kernels {

struct EntropySums {
  double power = 0.0;      // sum_k w_k |v_k|^t
  double power_log = 0.0;  // sum_k w_k |v_k|^t ln|v_k|^t   (0 ln 0 = 0)
};

namespace serial {

// int |grad u|^p
double energy(const Mesh& mesh, double p, std::span<const double> u);
// out_i = d/du_i (1/p) int |grad u|^p
void energy_gradient(const Mesh& mesh, double p, std::span<const double> u, std::span<double> out);
// int |u|^s (quadrature)
double power_sum(const Mesh& mesh, double s, std::span<const double> u);
// out_i = d/du_i (1/s) int |u|^s
void power_sum_gradient(const Mesh& mesh, double s, std::span<const double> u, std::span<double> out);
EntropySums entropy_sums(const Mesh& mesh, double t, std::span<const double> u);
double sup_abs(std::span<const double> u);

}  // namespace serial

namespace parallel {
// threads = 0 uses the OpenMP default team size.

double energy(const Mesh& mesh, double p, std::span<const double> u, int threads = 0);
void energy_gradient(const Mesh& mesh, double p, std::span<const double> u, std::span<double> out, int threads = 0);
double power_sum(const Mesh& mesh, double s, std::span<const double> u, int threads = 0);
void power_sum_gradient(const Mesh& mesh, double s, std::span<const double> u, std::span<double> out, int threads = 0);
EntropySums entropy_sums(const Mesh& mesh, double t, std::span<const double> u, int threads = 0);
double sup_abs(std::span<const double> u, int threads = 0);

}  // namespace parallel

// Dispatches to `parallel` when threads > 1, else `serial`.
struct Backend {
  int threads = 1;

  double energy(const Mesh& mesh, double p, std::span<const double> u) const;
  void energy_gradient(const Mesh& mesh, double p, std::span<const double> u, std::span<double> out) const;
  double power_sum(const Mesh& mesh, double s, std::span<const double> u) const;
  void power_sum_gradient(const Mesh& mesh, double s, std::span<const double> u, std::span<double> out) const;
};

}  // namespace sobolev::kernels
