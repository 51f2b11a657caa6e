#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sobolev/mesh.hpp"

namespace sobolev {

// Exponent pair (p, N) with 1 < p < N.
class Parameters {
 public:
  Parameters(double p, int n_dim);

  double p() const { return p_; }
  int n_dim() const { return n_dim_; }
  double critical_exponent() const;  // p* = Np/(N-p)

  bool operator==(const Parameters&) const = default;

 private:
  double p_;
  int n_dim_;
};

double critical_exponent(const Parameters& params);

// An exponent q in [1, p*] for a given parameter pair.
class QExponent {
 public:
  QExponent(double q, const Parameters& params);

  double value() const { return q_; }

 private:
  double q_;
};

// omega_N = pi^{N/2} / Gamma(1 + N/2)
double unit_ball_volume(int n_dim);

enum class DomainKind { radial_ball, grid_mask };

// Immutable computational domain. Copies share the underlying mesh.
class Domain {
 public:
  // Uniform radial mesh with `elements` segments on [0, radius].
  static Domain radial_ball(int n_dim, double radius, int elements);
  // Radial mesh on explicit nodes (first node 0, last node the radius).
  static Domain radial_ball(int n_dim, std::vector<double> node_radii);
  // Cartesian mask over cells (x fastest). n_dim is 2 or 3.
  static Domain grid_mask(int n_dim, double h, std::array<int, 3> cells,
                          std::vector<std::uint8_t> mask, std::array<double, 3> origin = {});
  // Mask of the cells whose centres satisfy `inside`, over the box [lower, upper].
  static Domain grid_from_predicate(int n_dim, double h, std::array<double, 3> lower,
                                    std::array<double, 3> upper,
                                    const std::function<bool(const std::array<double, 3>&)>& inside);

  DomainKind kind() const;
  int n_dim() const;
  double volume() const;
  int interior_count() const;
  int mesh_size() const;  // radial: element count; grid: cells along the first axis

  // radial only
  double radius() const;
  std::span<const double> node_radii() const;

  // grid only
  const GridGeometry& grid() const;
  std::span<const std::uint8_t> mask() const;

  // Coordinates of interior unknown i (radial: {r, 0, 0}).
  std::array<double, 3> interior_coordinate(int i) const;

  const Mesh& mesh() const;

  // Dilation x -> factor * x of the whole discretization.
  Domain scaled(double factor) const;
  // Nested refinement: radial elements bisected, grid cells split in 2^N.
  Domain refined() const;

  bool same_as(const Domain& other) const { return impl_ == other.impl_; }

  struct Impl;

 private:
  explicit Domain(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

double domain_volume(const Domain& domain);

// Nodal values of a function vanishing on the boundary (interior unknowns only).
class DiscreteField {
 public:
  DiscreteField(Domain domain, std::vector<double> values);

  // Samples f at interior nodes; radial domains pass |x|, grid domains the point.
  static DiscreteField from_radial(const Domain& domain, const std::function<double(double)>& f);
  static DiscreteField from_point(const Domain& domain,
                                  const std::function<double(const std::array<double, 3>&)>& f);

  const Domain& domain() const { return domain_; }
  std::span<const double> values() const { return values_; }
  std::size_t size() const { return values_.size(); }

  DiscreteField scaled(double c) const;

 private:
  Domain domain_;
  std::vector<double> values_;
};

// JSON descriptor: {"kind": "radial_ball", "n_dim", "radius", "mesh"} or
// {"kind": "grid_mask", "n_dim", "h", "cells", "origin", "mask_rle"} where
// mask_rle alternates run lengths starting with a run of zeros.
std::string domain_to_json(const Domain& domain);
Domain domain_from_json(const std::string& text);

std::vector<int> run_length_encode(std::span<const std::uint8_t> mask);
std::vector<std::uint8_t> run_length_decode(std::span<const int> runs, std::size_t total);

}  // namespace sobolev
