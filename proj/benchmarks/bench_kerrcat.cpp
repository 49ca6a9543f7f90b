#include <benchmark/benchmark.h>

#include "kerrcat/dynamics.hpp"
#include "kerrcat/fockspace.hpp"
#include "kerrcat/robustness.hpp"
#include "kerrcat/simulation.hpp"

using namespace kerrcat;

namespace {

ProtocolSpec optimal(int n) {
  ProtocolSpec spec;
  spec.kind = ProtocolKind::optimal;
  spec.n = n;
  return spec;
}

ProtocolSpec base() {
  ProtocolSpec spec;
  spec.kind = ProtocolKind::base;
  return spec;
}

}  // namespace

static void BM_LaguerreDiagonal(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(laguerre_diagonal(dim, 4.0));
}
BENCHMARK(BM_LaguerreDiagonal)->Arg(30)->Arg(60)->Arg(120);

static void BM_CatBasis(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cat_basis(dim, 2.0));
}
BENCHMARK(BM_CatBasis)->Arg(40)->Arg(80)->Unit(benchmark::kMicrosecond);

static void BM_DesignSchedule(benchmark::State& state) {
  const auto spec = optimal(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(design_schedule(spec));
}
BENCHMARK(BM_DesignSchedule)->Arg(1)->Arg(5)->Unit(benchmark::kMicrosecond);

static void BM_QsQuadrature(benchmark::State& state) {
  const auto s = design_schedule(base());
  for (auto _ : state) benchmark::DoNotOptimize(qs_quadrature(s, ProtocolKind::base));
}
BENCHMARK(BM_QsQuadrature)->Unit(benchmark::kMicrosecond);

static void BM_PropagateEffective(benchmark::State& state) {
  const Simulator sim;
  const auto s = sim.prepare(optimal(static_cast<int>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(sim.run(s, Model::effective));
}
BENCHMARK(BM_PropagateEffective)->Arg(1)->Arg(5)->Unit(benchmark::kMillisecond);

static void BM_PropagateFull(benchmark::State& state) {
  PhysicalSetup setup;
  setup.dim = static_cast<int>(state.range(0));
  const Simulator sim(setup);
  const auto s = sim.prepare(base());
  for (auto _ : state) benchmark::DoNotOptimize(sim.run(s, Model::full));
}
BENCHMARK(BM_PropagateFull)->Arg(40)->Arg(60)->Unit(benchmark::kSecond)->Iterations(1);

static void BM_LindbladEffective(benchmark::State& state) {
  const Simulator sim;
  const auto s = sim.prepare(base());
  const NoiseParams noise{0.01, 0.01};
  for (auto _ : state) benchmark::DoNotOptimize(sim.run(s, Model::lindblad_effective, {}, noise));
}
BENCHMARK(BM_LindbladEffective)->Unit(benchmark::kMillisecond);

static void BM_LindbladFull(benchmark::State& state) {
  PhysicalSetup setup;
  setup.lindblad_dim = static_cast<int>(state.range(0));
  const Simulator sim(setup);
  const auto s = sim.prepare(base());
  const NoiseParams noise{0.01, 0.01};
  for (auto _ : state) benchmark::DoNotOptimize(sim.run(s, Model::lindblad_full, {}, noise));
}
BENCHMARK(BM_LindbladFull)->Arg(40)->Unit(benchmark::kSecond)->Iterations(1);

BENCHMARK_MAIN();
