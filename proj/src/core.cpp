#include "sobolev/core.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "sobolev/error.hpp"

namespace sobolev {

Parameters::Parameters(double p, int n_dim) : p_(p), n_dim_(n_dim) {
  if (!std::isfinite(p) || n_dim < 2 || !(p > 1.0) || !(p < static_cast<double>(n_dim))) {
    std::ostringstream msg;
    msg << "invalid parameters: need 1 < p < N with N >= 2 (got p=" << p << ", N=" << n_dim << ")";
    throw InvalidArgument(msg.str());
  }
}

double Parameters::critical_exponent() const {
  const double n = static_cast<double>(n_dim_);
  return n * p_ / (n - p_);
}

double critical_exponent(const Parameters& params) { return params.critical_exponent(); }

QExponent::QExponent(double q, const Parameters& params) : q_(q) {
  const double p_star = params.critical_exponent();
  if (!std::isfinite(q) || q < 1.0 || q > p_star) {
    std::ostringstream msg;
    msg << "q=" << q << " outside [1, p*=" << p_star << "]";
    throw InvalidArgument(msg.str());
  }
}

double unit_ball_volume(int n_dim) {
  if (n_dim < 1) throw InvalidArgument("unit_ball_volume: n_dim must be >= 1");
  const double half = 0.5 * n_dim;
  return std::pow(std::numbers::pi, half) / std::tgamma(1.0 + half);
}

struct Domain::Impl {
  DomainKind kind = DomainKind::radial_ball;
  int n_dim = 2;
  double volume = 0.0;
  // radial
  double radius = 0.0;
  std::vector<double> radii;
  // grid
  GridGeometry grid;
  std::vector<std::uint8_t> mask;
  std::vector<int> node_to_interior;
  std::vector<int> interior_to_node;

  Mesh mesh;
};

namespace {

std::shared_ptr<Domain::Impl> make_radial(int n_dim, std::vector<double> radii) {
  if (n_dim < 1) throw InvalidArgument("radial domain: n_dim must be >= 1");
  if (radii.size() < 2) throw InvalidArgument("radial domain: need at least one element");
  if (radii.front() != 0.0) throw InvalidArgument("radial domain: first node must be r = 0");
  for (std::size_t i = 1; i < radii.size(); ++i) {
    if (!(radii[i] > radii[i - 1]) || !std::isfinite(radii[i])) {
      throw InvalidArgument("radial domain: node radii must be strictly increasing");
    }
  }
  auto impl = std::make_shared<Domain::Impl>();
  impl->kind = DomainKind::radial_ball;
  impl->n_dim = n_dim;
  impl->radius = radii.back();
  impl->volume = unit_ball_volume(n_dim) * std::pow(impl->radius, n_dim);
  impl->mesh = build_radial_mesh(n_dim, radii);
  impl->radii = std::move(radii);
  return impl;
}

std::size_t cell_total(const GridGeometry& g) {
  std::size_t total = 1;
  for (int d = 0; d < g.n_dim; ++d) total *= static_cast<std::size_t>(g.cells[d]);
  return total;
}

std::shared_ptr<Domain::Impl> make_grid(const GridGeometry& geometry, std::vector<std::uint8_t> mask) {
  if (geometry.n_dim != 2 && geometry.n_dim != 3) {
    throw InvalidArgument("grid domain: dimension must be 2 or 3");
  }
  if (!(geometry.h > 0.0) || !std::isfinite(geometry.h)) {
    throw InvalidArgument("grid domain: mesh width must be positive");
  }
  for (int d = 0; d < geometry.n_dim; ++d) {
    if (geometry.cells[d] < 1) throw InvalidArgument("grid domain: cell counts must be >= 1");
  }
  GridGeometry g = geometry;
  for (int d = g.n_dim; d < 3; ++d) g.cells[d] = 1;
  if (mask.size() != cell_total(g)) throw InvalidArgument("grid domain: mask size mismatch");
  std::size_t count = 0;
  for (auto& m : mask) {
    m = m ? 1 : 0;
    count += m;
  }
  if (count == 0) throw InvalidArgument("grid domain: mask has no cells");

  auto impl = std::make_shared<Domain::Impl>();
  impl->kind = DomainKind::grid_mask;
  impl->n_dim = g.n_dim;
  impl->grid = g;
  impl->volume = static_cast<double>(count) * std::pow(g.h, g.n_dim);
  impl->mesh = build_grid_mesh(g, mask, impl->node_to_interior);
  impl->interior_to_node.assign(impl->mesh.n_interior, -1);
  for (std::size_t node = 0; node < impl->node_to_interior.size(); ++node) {
    const int k = impl->node_to_interior[node];
    if (k >= 0) impl->interior_to_node[k] = static_cast<int>(node);
  }
  impl->mask = std::move(mask);
  return impl;
}

}  // namespace

Domain Domain::radial_ball(int n_dim, double radius, int elements) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("radial domain: radius must be positive");
  if (elements < 1) throw InvalidArgument("radial domain: need at least one element");
  std::vector<double> radii(elements + 1);
  for (int i = 0; i <= elements; ++i) radii[i] = radius * static_cast<double>(i) / elements;
  radii.back() = radius;
  return Domain(make_radial(n_dim, std::move(radii)));
}

Domain Domain::radial_ball(int n_dim, std::vector<double> node_radii) {
  return Domain(make_radial(n_dim, std::move(node_radii)));
}

Domain Domain::grid_mask(int n_dim, double h, std::array<int, 3> cells, std::vector<std::uint8_t> mask,
                         std::array<double, 3> origin) {
  GridGeometry g;
  g.n_dim = n_dim;
  g.h = h;
  g.cells = cells;
  g.origin = origin;
  return Domain(make_grid(g, std::move(mask)));
}

Domain Domain::grid_from_predicate(int n_dim, double h, std::array<double, 3> lower,
                                   std::array<double, 3> upper,
                                   const std::function<bool(const std::array<double, 3>&)>& inside) {
  if (n_dim != 2 && n_dim != 3) throw InvalidArgument("grid domain: dimension must be 2 or 3");
  if (!(h > 0.0)) throw InvalidArgument("grid domain: mesh width must be positive");
  std::array<int, 3> cells{1, 1, 1};
  for (int d = 0; d < n_dim; ++d) {
    const double extent = upper[d] - lower[d];
    if (!(extent > 0.0)) throw InvalidArgument("grid domain: empty bounding box");
    cells[d] = static_cast<int>(std::llround(extent / h));
    if (cells[d] < 1) cells[d] = 1;
  }
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(cells[0]) * cells[1] * cells[2], 0);
  std::size_t idx = 0;
  for (int k = 0; k < cells[2]; ++k) {
    for (int j = 0; j < cells[1]; ++j) {
      for (int i = 0; i < cells[0]; ++i, ++idx) {
        std::array<double, 3> c{lower[0] + (i + 0.5) * h, lower[1] + (j + 0.5) * h,
                                n_dim == 3 ? lower[2] + (k + 0.5) * h : 0.0};
        mask[idx] = inside(c) ? 1 : 0;
      }
    }
  }
  std::array<double, 3> origin{lower[0], lower[1], n_dim == 3 ? lower[2] : 0.0};
  return grid_mask(n_dim, h, cells, std::move(mask), origin);
}

DomainKind Domain::kind() const { return impl_->kind; }
int Domain::n_dim() const { return impl_->n_dim; }
double Domain::volume() const { return impl_->volume; }
int Domain::interior_count() const { return impl_->mesh.n_interior; }

int Domain::mesh_size() const {
  if (impl_->kind == DomainKind::radial_ball) return static_cast<int>(impl_->radii.size()) - 1;
  return impl_->grid.cells[0];
}

double Domain::radius() const {
  if (impl_->kind != DomainKind::radial_ball) throw InvalidArgument("radius(): not a radial domain");
  return impl_->radius;
}

std::span<const double> Domain::node_radii() const {
  if (impl_->kind != DomainKind::radial_ball) throw InvalidArgument("node_radii(): not a radial domain");
  return impl_->radii;
}

const GridGeometry& Domain::grid() const {
  if (impl_->kind != DomainKind::grid_mask) throw InvalidArgument("grid(): not a grid domain");
  return impl_->grid;
}

std::span<const std::uint8_t> Domain::mask() const {
  if (impl_->kind != DomainKind::grid_mask) throw InvalidArgument("mask(): not a grid domain");
  return impl_->mask;
}

std::array<double, 3> Domain::interior_coordinate(int i) const {
  if (i < 0 || i >= interior_count()) throw InvalidArgument("interior_coordinate: index out of range");
  if (impl_->kind == DomainKind::radial_ball) return {impl_->radii[i], 0.0, 0.0};
  const auto& g = impl_->grid;
  const int node = impl_->interior_to_node[i];
  const int nx = g.cells[0] + 1;
  const int ny = g.cells[1] + 1;
  const int ix = node % nx;
  const int iy = (node / nx) % ny;
  const int iz = node / (nx * ny);
  return {g.origin[0] + ix * g.h, g.origin[1] + iy * g.h, g.n_dim == 3 ? g.origin[2] + iz * g.h : 0.0};
}

const Mesh& Domain::mesh() const { return impl_->mesh; }

Domain Domain::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("scaled: factor must be positive");
  if (impl_->kind == DomainKind::radial_ball) {
    std::vector<double> radii = impl_->radii;
    for (auto& r : radii) r *= factor;
    return Domain(make_radial(impl_->n_dim, std::move(radii)));
  }
  GridGeometry g = impl_->grid;
  g.h *= factor;
  for (auto& o : g.origin) o *= factor;
  return Domain(make_grid(g, impl_->mask));
}

Domain Domain::refined() const {
  if (impl_->kind == DomainKind::radial_ball) {
    const auto& r = impl_->radii;
    std::vector<double> radii;
    radii.reserve(2 * r.size() - 1);
    for (std::size_t i = 0; i + 1 < r.size(); ++i) {
      radii.push_back(r[i]);
      radii.push_back(0.5 * (r[i] + r[i + 1]));
    }
    radii.push_back(r.back());
    return Domain(make_radial(impl_->n_dim, std::move(radii)));
  }
  const GridGeometry& g = impl_->grid;
  GridGeometry fine = g;
  fine.h = 0.5 * g.h;
  for (int d = 0; d < g.n_dim; ++d) fine.cells[d] = 2 * g.cells[d];
  std::vector<std::uint8_t> mask(static_cast<std::size_t>(fine.cells[0]) * fine.cells[1] * fine.cells[2]);
  std::size_t idx = 0;
  for (int k = 0; k < fine.cells[2]; ++k) {
    for (int j = 0; j < fine.cells[1]; ++j) {
      for (int i = 0; i < fine.cells[0]; ++i, ++idx) {
        const int kc = g.n_dim == 3 ? k / 2 : 0;
        const std::size_t coarse =
            (static_cast<std::size_t>(kc) * g.cells[1] + j / 2) * g.cells[0] + i / 2;
        mask[idx] = impl_->mask[coarse];
      }
    }
  }
  return Domain(make_grid(fine, std::move(mask)));
}

double domain_volume(const Domain& domain) { return domain.volume(); }

DiscreteField::DiscreteField(Domain domain, std::vector<double> values)
    : domain_(std::move(domain)), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(domain_.interior_count())) {
    throw InvalidArgument("DiscreteField: value count does not match interior node count");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw InvalidArgument("DiscreteField: non-finite nodal value");
  }
}

DiscreteField DiscreteField::from_radial(const Domain& domain, const std::function<double(double)>& f) {
  std::vector<double> v(domain.interior_count());
  for (int i = 0; i < domain.interior_count(); ++i) {
    const auto x = domain.interior_coordinate(i);
    const double r = domain.kind() == DomainKind::radial_ball
                         ? x[0]
                         : std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
    v[i] = f(r);
  }
  return DiscreteField(domain, std::move(v));
}

DiscreteField DiscreteField::from_point(const Domain& domain,
                                        const std::function<double(const std::array<double, 3>&)>& f) {
  std::vector<double> v(domain.interior_count());
  for (int i = 0; i < domain.interior_count(); ++i) v[i] = f(domain.interior_coordinate(i));
  return DiscreteField(domain, std::move(v));
}

DiscreteField DiscreteField::scaled(double c) const {
  std::vector<double> v = values_;
  for (auto& x : v) x *= c;
  return DiscreteField(domain_, std::move(v));
}

std::vector<int> run_length_encode(std::span<const std::uint8_t> mask) {
  std::vector<int> runs;
  std::uint8_t current = 0;
  int length = 0;
  for (auto m : mask) {
    const std::uint8_t bit = m ? 1 : 0;
    if (bit == current) {
      ++length;
    } else {
      runs.push_back(length);
      current = bit;
      length = 1;
    }
  }
  runs.push_back(length);
  return runs;
}

std::vector<std::uint8_t> run_length_decode(std::span<const int> runs, std::size_t total) {
  std::vector<std::uint8_t> mask;
  mask.reserve(total);
  std::uint8_t current = 0;
  for (int run : runs) {
    if (run < 0) throw InvalidArgument("mask_rle: negative run length");
    mask.insert(mask.end(), static_cast<std::size_t>(run), current);
    current ^= 1;
  }
  if (mask.size() != total) throw InvalidArgument("mask_rle: decoded length does not match cell count");
  return mask;
}

std::string domain_to_json(const Domain& domain) {
  nlohmann::ordered_json j;
  j["n_dim"] = domain.n_dim();
  if (domain.kind() == DomainKind::radial_ball) {
    j["kind"] = "radial_ball";
    j["radius"] = domain.radius();
    const auto radii = domain.node_radii();
    const int m = static_cast<int>(radii.size()) - 1;
    bool uniform = true;
    for (int i = 0; i <= m && uniform; ++i) {
      uniform = radii[i] == domain.radius() * static_cast<double>(i) / m || i == m;
    }
    j["mesh"] = m;
    if (!uniform) j["node_radii"] = std::vector<double>(radii.begin(), radii.end());
  } else {
    const auto& g = domain.grid();
    j["kind"] = "grid_mask";
    j["h"] = g.h;
    j["cells"] = std::vector<int>(g.cells.begin(), g.cells.begin() + g.n_dim);
    j["origin"] = std::vector<double>(g.origin.begin(), g.origin.begin() + g.n_dim);
    j["mask_rle"] = run_length_encode(domain.mask());
  }
  j["volume"] = domain.volume();
  return j.dump(2);
}

Domain domain_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("domain descriptor: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int n_dim = j.at("n_dim").get<int>();
    if (kind == "radial_ball") {
      if (j.contains("node_radii")) return Domain::radial_ball(n_dim, j["node_radii"].get<std::vector<double>>());
      return Domain::radial_ball(n_dim, j.at("radius").get<double>(), j.at("mesh").get<int>());
    }
    if (kind == "grid_mask") {
      const auto cells_v = j.at("cells").get<std::vector<int>>();
      if (static_cast<int>(cells_v.size()) != n_dim) throw InvalidArgument("domain descriptor: cells length != n_dim");
      std::array<int, 3> cells{1, 1, 1};
      std::array<double, 3> origin{0.0, 0.0, 0.0};
      std::size_t total = 1;
      for (int d = 0; d < n_dim; ++d) {
        cells[d] = cells_v[d];
        total *= static_cast<std::size_t>(std::max(cells_v[d], 0));
      }
      if (j.contains("origin")) {
        const auto o = j["origin"].get<std::vector<double>>();
        for (int d = 0; d < n_dim && d < static_cast<int>(o.size()); ++d) origin[d] = o[d];
      }
      const auto runs = j.at("mask_rle").get<std::vector<int>>();
      return Domain::grid_mask(n_dim, j.at("h").get<double>(), cells, run_length_decode(runs, total), origin);
    }
    throw InvalidArgument("domain descriptor: unknown kind '" + kind + "'");
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("domain descriptor: ") + e.what());
  }
}

}  // namespace sobolev
