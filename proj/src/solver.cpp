#include "sobolev/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Sparse>

#include "sobolev/error.hpp"
#include "sobolev/kernels.hpp"

namespace sobolev {

void SolveOptions::validate() const {
  if (max_iterations < 1) throw InvalidArgument("SolveOptions: max_iterations must be >= 1");
  if (!(tolerance_rel > 0.0) || !(gradient_tolerance > 0.0)) {
    throw InvalidArgument("SolveOptions: tolerances must be positive");
  }
  if (!(initial_step > 0.0)) throw InvalidArgument("SolveOptions: initial_step must be positive");
  if (!(backtrack_factor > 0.0 && backtrack_factor < 1.0)) {
    throw InvalidArgument("SolveOptions: backtrack_factor must lie in (0,1)");
  }
  if (!(armijo_constant > 0.0 && armijo_constant < 1.0)) {
    throw InvalidArgument("SolveOptions: armijo_constant must lie in (0,1)");
  }
  if (threads < 1) throw InvalidArgument("SolveOptions: threads must be >= 1");
}

namespace {

constexpr double kConcentrationMargin = 0.1;
constexpr double kMinStep = 1e-14;
// Relative gradient regularization inside the metric weights |g|^{p-2}.
constexpr double kMetricDelta = 1e-8;

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// SPD metric sum_e w_e rho_e G_e^T M_e G_e where rho_e = (|g_e|^2 + delta^2)^{(p-2)/2}.
// With `newton`, M_e = I + (p-2) g g^T / (|g|^2 + delta^2) (the Hessian of |g|^p / p
// up to the regularization); otherwise M_e = I.
class Metric {
 public:
  explicit Metric(const Mesh& mesh) : mesh_(mesh), matrix_(mesh.n_interior, mesh.n_interior) {}

  void assemble(double p, const Vec& u, bool newton) {
    const int dim = mesh_.grad_dim;
    const int npe = mesh_.nodes_per_element;
    std::vector<std::array<double, 3>> grads(mesh_.elements.size());
    double gmax2 = 0.0;
    for (std::size_t ei = 0; ei < mesh_.elements.size(); ++ei) {
      const auto& e = mesh_.elements[ei];
      std::array<double, 3> g{0.0, 0.0, 0.0};
      for (int k = 0; k < npe; ++k) {
        if (e.nodes[k] < 0) continue;
        for (int d = 0; d < dim; ++d) g[d] += u[e.nodes[k]] * mesh_.shapes[e.shape].grad[k][d];
      }
      grads[ei] = g;
      gmax2 = std::max(gmax2, g[0] * g[0] + g[1] * g[1] + g[2] * g[2]);
    }
    const double delta2 = gmax2 > 0.0 ? kMetricDelta * kMetricDelta * gmax2 : 1.0;

    triplets_.clear();
    triplets_.reserve(mesh_.elements.size() * npe * npe);
    for (std::size_t ei = 0; ei < mesh_.elements.size(); ++ei) {
      const auto& e = mesh_.elements[ei];
      const auto& shape = mesh_.shapes[e.shape];
      const auto& g = grads[ei];
      const double g2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
      const double rho = p == 2.0 ? 1.0 : std::pow(g2 + delta2, 0.5 * (p - 2.0));
      std::array<std::array<double, 3>, 3> m{};
      for (int a = 0; a < dim; ++a) {
        m[a][a] = 1.0;
        if (newton) {
          for (int b = 0; b < dim; ++b) m[a][b] += (p - 2.0) * g[a] * g[b] / (g2 + delta2);
        }
      }
      for (int i = 0; i < npe; ++i) {
        if (e.nodes[i] < 0) continue;
        for (int j = 0; j < npe; ++j) {
          if (e.nodes[j] < 0) continue;
          double s = 0.0;
          for (int a = 0; a < dim; ++a) {
            for (int b = 0; b < dim; ++b) s += shape.grad[i][a] * m[a][b] * shape.grad[j][b];
          }
          triplets_.emplace_back(e.nodes[i], e.nodes[j], e.weight * rho * s);
        }
      }
    }
    matrix_.setFromTriplets(triplets_.begin(), triplets_.end());
    if (!analyzed_) {
      ldlt_.analyzePattern(matrix_);
      analyzed_ = true;
    }
    ldlt_.factorize(matrix_);
    if (ldlt_.info() != Eigen::Success) throw NonConvergence("metric factorization failed");
  }

  Vec solve(const Vec& rhs) const {
    Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    Eigen::VectorXd x = ldlt_.solve(b);
    return Vec(x.data(), x.data() + x.size());
  }

 private:
  const Mesh& mesh_;
  Eigen::SparseMatrix<double> matrix_;
  std::vector<Eigen::Triplet<double>> triplets_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  bool analyzed_ = false;
};

Vec load_vector(const Mesh& mesh, const kernels::Backend& backend) {
  // d/du_i of int u, i.e. int phi_i
  Vec ones(mesh.n_interior, 1.0);
  Vec b(mesh.n_interior);
  backend.power_sum_gradient(mesh, 1.0, ones, b);
  return b;
}

struct TorsionCore {
  Vec u;
  double functional_value = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;
};

TorsionCore torsion_core(const Mesh& mesh, double p, const SolveOptions& opts) {
  const kernels::Backend backend{opts.threads};
  const int n = mesh.n_interior;
  const Vec b = load_vector(mesh, backend);
  Metric metric(mesh);

  // Start from the p = 2 Poisson solution, rescaled to minimize J along its ray.
  Vec u(n, 1.0);
  metric.assemble(2.0, u, false);
  u = metric.solve(b);
  {
    const double e = backend.energy(mesh, p, u);
    const double l = dot(b, u);
    const double t = std::pow(l / e, 1.0 / (p - 1.0));
    for (auto& x : u) x *= t;
  }

  auto objective = [&](const Vec& v) { return backend.energy(mesh, p, v) / p - dot(b, v); };

  TorsionCore out;
  double j = objective(u);
  double last_rel = std::numeric_limits<double>::infinity();
  Vec a(n);
  Vec trial(n);
  for (int it = 0; it < opts.max_iterations; ++it) {
    backend.energy_gradient(mesh, p, u, a);
    Vec r(n);
    for (int i = 0; i < n; ++i) r[i] = a[i] - b[i];
    metric.assemble(p, u, p > 2.0);
    Vec d = metric.solve(r);
    for (auto& x : d) x = -x;
    const double slope = dot(r, d);
    const double energy = backend.energy(mesh, p, u);
    out.gradient_norm = std::sqrt(std::max(0.0, -slope) / std::max(energy, std::numeric_limits<double>::min()));
    out.iterations = it;
    if (out.gradient_norm < opts.gradient_tolerance && last_rel < opts.tolerance_rel) {
      out.converged = true;
      break;
    }
    const double allowance = 8.0 * std::numeric_limits<double>::epsilon() * std::abs(j);
    double alpha = opts.initial_step;
    bool accepted = false;
    double jt = j;
    while (alpha >= kMinStep) {
      for (int i = 0; i < n; ++i) trial[i] = u[i] + alpha * d[i];
      jt = objective(trial);
      if (jt <= j + opts.armijo_constant * alpha * slope + allowance) {
        accepted = true;
        break;
      }
      alpha *= opts.backtrack_factor;
    }
    if (!accepted) break;
    last_rel = std::abs(j - jt) / std::max(std::abs(jt), std::numeric_limits<double>::min());
    u.swap(trial);
    j = jt;
    out.iterations = it + 1;
  }
  out.u = std::move(u);
  out.functional_value = j;
  return out;
}

Vec initial_seed(const Domain& domain, const Parameters& params, const SolveOptions& opts) {
  const int n = domain.interior_count();
  SeedProfile seed = opts.seed_profile;
  if (seed == SeedProfile::w1_profile && domain.kind() != DomainKind::radial_ball) seed = SeedProfile::torsion_like;
  switch (seed) {
    case SeedProfile::custom: {
      if (static_cast<int>(opts.custom_seed.size()) != n) {
        throw InvalidArgument("minimize_rayleigh: custom seed length does not match interior node count");
      }
      Vec u(n);
      for (int i = 0; i < n; ++i) u[i] = std::abs(opts.custom_seed[i]);
      return u;
    }
    case SeedProfile::w1_profile: {
      const double e = params.p() / (params.p() - 1.0);
      const double radius = domain.radius();
      Vec u(n);
      for (int i = 0; i < n; ++i) u[i] = 1.0 - std::pow(domain.interior_coordinate(i)[0] / radius, e);
      return u;
    }
    case SeedProfile::torsion_like:
      break;
  }
  SolveOptions torsion_opts = opts;
  torsion_opts.max_iterations = std::min(opts.max_iterations, 200);
  return torsion_core(domain.mesh(), params.p(), torsion_opts).u;
}

}  // namespace

DiscreteField energy_gradient(const DiscreteField& u, const QExponent& q, const Parameters& params) {
  const Mesh& mesh = u.domain().mesh();
  const double p = params.p();
  const double qv = q.value();
  const auto v = u.values();
  const double qsum = kernels::serial::power_sum(mesh, qv, v);
  if (qsum == 0.0) throw DegenerateInput("energy_gradient: ||u||_q = 0");
  const double norm_q = std::pow(qsum, 1.0 / qv);
  const double energy = kernels::serial::energy(mesh, p, v);
  const double r = energy / std::pow(norm_q, p);
  Vec a(mesh.n_interior);
  Vec b(mesh.n_interior);
  kernels::serial::energy_gradient(mesh, p, v, a);
  kernels::serial::power_sum_gradient(mesh, qv, v, b);
  const double scale = p / std::pow(norm_q, p);
  const double coupling = r * std::pow(norm_q, p - qv);
  Vec g(mesh.n_interior);
  for (int i = 0; i < mesh.n_interior; ++i) g[i] = scale * (a[i] - coupling * b[i]);
  return DiscreteField(u.domain(), std::move(g));
}

double weak_residual_norm(const DiscreteField& u, double lambda, const QExponent& q, const Parameters& params) {
  const Mesh& mesh = u.domain().mesh();
  const double p = params.p();
  Vec v(u.values().begin(), u.values().end());
  Vec a(mesh.n_interior);
  Vec b(mesh.n_interior);
  kernels::serial::energy_gradient(mesh, p, v, a);
  kernels::serial::power_sum_gradient(mesh, q.value(), v, b);
  Vec r(mesh.n_interior);
  for (int i = 0; i < mesh.n_interior; ++i) r[i] = a[i] - lambda * b[i];
  Metric metric(mesh);
  metric.assemble(p, v, false);
  const Vec d = metric.solve(r);
  const double energy = kernels::serial::energy(mesh, p, v);
  if (energy == 0.0) throw DegenerateInput("weak_residual_norm: zero energy");
  return std::sqrt(std::max(0.0, dot(r, d)) / energy);
}

SolveResult minimize_rayleigh(const Domain& domain, const QExponent& q, const Parameters& params,
                              const SolveOptions& opts) {
  opts.validate();
  if (domain.interior_count() == 0) throw DegenerateInput("minimize_rayleigh: domain has no interior nodes");
  if (domain.n_dim() != params.n_dim()) throw InvalidArgument("minimize_rayleigh: domain dimension != N");
  const Mesh& mesh = domain.mesh();
  const kernels::Backend backend{opts.threads};
  const int n = mesh.n_interior;
  const double p = params.p();
  const double qv = q.value();

  auto normalize = [&](Vec& v) {
    const double s = backend.power_sum(mesh, qv, v);
    if (!(s > 0.0)) return false;
    const double f = std::pow(s, -1.0 / qv);
    for (auto& x : v) x *= f;
    return true;
  };

  Vec u = initial_seed(domain, params, opts);
  for (auto& x : u) x = std::max(x, 0.0);
  if (!normalize(u)) throw DegenerateInput("minimize_rayleigh: seed is identically zero");

  Metric metric(mesh);
  double rq = backend.energy(mesh, p, u);
  std::vector<double> trace{rq};
  double last_rel = std::numeric_limits<double>::infinity();
  double gnorm = std::numeric_limits<double>::infinity();
  bool converged = false;
  int iterations = 0;
  Vec a(n);
  Vec b(n);
  Vec r(n);
  Vec trial(n);
  for (int it = 0; it < opts.max_iterations; ++it) {
    backend.energy_gradient(mesh, p, u, a);
    backend.power_sum_gradient(mesh, qv, u, b);
    for (int i = 0; i < n; ++i) r[i] = a[i] - rq * b[i];
    metric.assemble(p, u, false);
    Vec d = metric.solve(r);
    for (auto& x : d) x = -x;
    // grad R_q = p r on the normalized sphere
    const double slope = p * dot(r, d);
    gnorm = std::sqrt(std::max(0.0, -dot(r, d)) / rq);
    iterations = it;
    if (gnorm < opts.gradient_tolerance && last_rel < opts.tolerance_rel) {
      converged = true;
      break;
    }
    const double allowance = 8.0 * std::numeric_limits<double>::epsilon() * rq;
    double alpha = opts.initial_step;
    double rt = rq;
    bool accepted = false;
    while (alpha >= kMinStep) {
      for (int i = 0; i < n; ++i) trial[i] = std::max(u[i] + alpha * d[i], 0.0);
      if (normalize(trial)) {
        rt = backend.energy(mesh, p, trial);
        if (rt <= rq + opts.armijo_constant * alpha * slope + allowance) {
          accepted = true;
          break;
        }
      }
      alpha *= opts.backtrack_factor;
    }
    if (!accepted) break;
    last_rel = (rq - rt) / rt;
    u.swap(trial);
    rq = rt;
    trace.push_back(rq);
    iterations = it + 1;
  }

  // Exit renormalization and recomputation.
  normalize(u);
  DiscreteField extremal(domain, std::move(u));
  const double lambda_hat = backend.energy(mesh, p, extremal.values());
  return SolveResult{
      .q = qv,
      .lambda_hat = lambda_hat,
      .extremal = std::move(extremal),
      .iterations = iterations,
      .converged = converged,
      .final_gradient_norm = gnorm,
      .mesh_size = domain.mesh_size(),
      .concentration_regime = qv > params.critical_exponent() - kConcentrationMargin,
      .trace = std::move(trace),
  };
}

TorsionResult solve_torsion(const Domain& domain, const Parameters& params, const SolveOptions& opts) {
  opts.validate();
  if (domain.interior_count() == 0) throw DegenerateInput("solve_torsion: domain has no interior nodes");
  if (domain.n_dim() != params.n_dim()) throw InvalidArgument("solve_torsion: domain dimension != N");
  TorsionCore core = torsion_core(domain.mesh(), params.p(), opts);
  const kernels::Backend backend{opts.threads};
  const double l1 = backend.power_sum(domain.mesh(), 1.0, core.u);
  return TorsionResult{
      .torsion = DiscreteField(domain, std::move(core.u)),
      .functional_value = core.functional_value,
      .l1_norm = l1,
      .lambda1_hat = std::pow(l1, 1.0 - params.p()),
      .iterations = core.iterations,
      .converged = core.converged,
      .final_gradient_norm = core.gradient_norm,
      .mesh_size = domain.mesh_size(),
  };
}

RefinementResult refine_and_extrapolate(const Domain& domain, const QExponent& q, const Parameters& params,
                                        const SolveOptions& opts, int levels) {
  if (levels < 2) throw InvalidArgument("refine_and_extrapolate: need at least 2 levels");
  RefinementResult out;
  Domain current = domain;
  for (int level = 0; level < levels; ++level) {
    if (level > 0) current = current.refined();
    const SolveResult s = minimize_rayleigh(current, q, params, opts);
    if (!s.converged) {
      std::ostringstream msg;
      msg << "refine_and_extrapolate: solve did not converge at mesh size " << current.mesh_size();
      throw NonConvergence(msg.str());
    }
    out.mesh_sizes.push_back(current.mesh_size());
    out.lambda_hat.push_back(s.lambda_hat);
    out.converged.push_back(s.converged);
  }
  const auto& l = out.lambda_hat;
  const std::size_t k = l.size();
  double order = 2.0;
  if (k >= 3) {
    const double d1 = l[k - 3] - l[k - 2];
    const double d2 = l[k - 2] - l[k - 1];
    if (d1 > 0.0 && d2 > 0.0) order = std::log2(d1 / d2);
  }
  out.observed_order = order;
  out.richardson_limit = l[k - 1] - (l[k - 2] - l[k - 1]) / (std::pow(2.0, order) - 1.0);
  return out;
}

}  // namespace sobolev
