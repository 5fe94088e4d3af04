// Serial reference kernels against their OpenMP versions.
#include "glin/gap_metric.hpp"
#include "glin/mapping_space.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace glin;

namespace {

DiscreteMap loop(const Manifold& s2, int m, double phase) {
  return DiscreteMap::sample(s2, m, [phase](double t) {
    Vec v(3);
    v << std::cos(t + phase), std::sin(t + phase), 0.3 * std::sin(2 * t);
    return v;
  });
}

template <bool Serial>
void BM_DistX(benchmark::State& state) {
  const Manifold s2 = Manifold::sphere(2);
  const GapMetric metric(Linearization(s2), GapFn{});
  const WitnessSet w = WitnessSet::random(s2, 1, static_cast<int>(state.range(0)));
  const Point x = s2.random_point(2), y = s2.random_point(3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(Serial ? metric.dist_x_serial(x, y, w) : metric.dist_x(x, y, w));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}

template <bool Serial>
void BM_LiftedNu(benchmark::State& state) {
  const Manifold s2 = Manifold::sphere(2);
  const Linearization lin(s2);
  const int m = static_cast<int>(state.range(0));
  const DiscreteMap f = loop(s2, m, 0.0), g = loop(s2, m, 0.4);
  for (auto _ : state) {
    auto e = Serial ? serial::lifted_nu(lin, f, g) : lifted_nu(lin, f, g);
    benchmark::DoNotOptimize(e);
  }
}

template <bool Serial>
void BM_LiftedDelta(benchmark::State& state) {
  const Manifold s2 = Manifold::sphere(2);
  const Linearization lin(s2);
  const int m = static_cast<int>(state.range(0));
  const LiftedBundleElem e = lifted_nu(lin, loop(s2, m, 0.0), loop(s2, m, 0.4));
  for (auto _ : state) {
    auto d = Serial ? serial::lifted_delta(lin, e) : lifted_delta(lin, e);
    benchmark::DoNotOptimize(d);
  }
}

template <bool Serial>
void BM_DirichletEnergy(benchmark::State& state) {
  const DiscreteMap u = loop(Manifold::sphere(2), static_cast<int>(state.range(0)), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(Serial ? serial::dirichlet_energy(u) : dirichlet_energy(u));
}

template <bool Serial>
void BM_DirichletDifferential(benchmark::State& state) {
  const DiscreteMap u = loop(Manifold::sphere(2), static_cast<int>(state.range(0)), 0.0);
  for (auto _ : state) {
    auto g = Serial ? serial::dirichlet_differential(u) : dirichlet_differential(u);
    benchmark::DoNotOptimize(g);
  }
}

}  // namespace

BENCHMARK(BM_DistX<true>)->Name("dist_x/serial")->Arg(128)->Arg(4096);
BENCHMARK(BM_DistX<false>)->Name("dist_x/openmp")->Arg(128)->Arg(4096);
BENCHMARK(BM_LiftedNu<true>)->Name("lifted_nu/serial")->Arg(256)->Arg(4096);
BENCHMARK(BM_LiftedNu<false>)->Name("lifted_nu/openmp")->Arg(256)->Arg(4096);
BENCHMARK(BM_LiftedDelta<true>)->Name("lifted_delta/serial")->Arg(256)->Arg(4096);
BENCHMARK(BM_LiftedDelta<false>)->Name("lifted_delta/openmp")->Arg(256)->Arg(4096);
BENCHMARK(BM_DirichletEnergy<true>)->Name("dirichlet_energy/serial")->Arg(256)->Arg(4096);
BENCHMARK(BM_DirichletEnergy<false>)->Name("dirichlet_energy/openmp")->Arg(256)->Arg(4096);
BENCHMARK(BM_DirichletDifferential<true>)->Name("dirichlet_differential/serial")->Arg(256)->Arg(4096);
BENCHMARK(BM_DirichletDifferential<false>)->Name("dirichlet_differential/openmp")->Arg(256)->Arg(4096);

BENCHMARK_MAIN();
