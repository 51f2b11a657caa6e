#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "sobolev/core.hpp"
#include "sobolev/kernels.hpp"

namespace {

using namespace sobolev;

const Domain& grid_ball() {
  static const Domain d = Domain::grid_from_predicate(
      3, 0.04, {-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0},
      [](const std::array<double, 3>& x) { return x[0] * x[0] + x[1] * x[1] + x[2] * x[2] < 1.0; });
  return d;
}

const DiscreteField& field() {
  static const DiscreteField u = DiscreteField::from_point(grid_ball(), [](const std::array<double, 3>& x) {
    return std::cos(0.5 * M_PI * std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]));
  });
  return u;
}

// Arg: 0 selects the serial reference, k > 0 the parallel kernel with k threads.
void BM_energy(benchmark::State& state) {
  const Mesh& mesh = grid_ball().mesh();
  const auto u = field().values();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const double e = threads == 0 ? kernels::serial::energy(mesh, 3.0, u) : kernels::parallel::energy(mesh, 3.0, u, threads);
    benchmark::DoNotOptimize(e);
  }
}

void BM_energy_gradient(benchmark::State& state) {
  const Mesh& mesh = grid_ball().mesh();
  const auto u = field().values();
  std::vector<double> g(u.size());
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    if (threads == 0) kernels::serial::energy_gradient(mesh, 3.0, u, g);
    else kernels::parallel::energy_gradient(mesh, 3.0, u, g, threads);
    benchmark::DoNotOptimize(g.data());
  }
}

void BM_power_sum(benchmark::State& state) {
  const Mesh& mesh = grid_ball().mesh();
  const auto u = field().values();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const double s = threads == 0 ? kernels::serial::power_sum(mesh, 4.5, u) : kernels::parallel::power_sum(mesh, 4.5, u, threads);
    benchmark::DoNotOptimize(s);
  }
}

void BM_entropy_sums(benchmark::State& state) {
  const Mesh& mesh = grid_ball().mesh();
  const auto u = field().values();
  const int threads = static_cast<int>(state.range(0));
  for (auto _ : state) {
    const auto s = threads == 0 ? kernels::serial::entropy_sums(mesh, 2.5, u) : kernels::parallel::entropy_sums(mesh, 2.5, u, threads);
    benchmark::DoNotOptimize(s);
  }
}

}  // namespace

BENCHMARK(BM_energy)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_energy_gradient)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_power_sum)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);
BENCHMARK(BM_entropy_sums)->Arg(0)->Arg(1)->Arg(2)->Arg(4)->UseRealTime()->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
