#include <benchmark/benchmark.h>

#include "qgraph/asymptotics.hpp"
#include "qgraph/gallery.hpp"
#include "qgraph/partition.hpp"

using namespace qgraph;

namespace {

Execution mode(const benchmark::State& state) {
  return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

void BM_ExteriorScan(benchmark::State& state) {
  const MetricGraph g = make_tree(2, 8);
  const Potential v = Potential::zero(g);
  ScanOptions o;
  o.h = 0.25;
  o.execution = mode(state);
  const std::vector<double> radii{0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0};
  for (auto _ : state) benchmark::DoNotOptimize(radius_scan(g, v, g.vertex_point(0), radii, ScanDirection::exterior, o));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_PartitionEnergy(benchmark::State& state) {
  const MetricGraph g = make_star(8, 4.0);
  const Potential v = Potential::zero(g);
  Partition p;
  p.cuts = {g.vertex_point(0)};
  p.clusters = cut_components(g, p.cuts);
  for (auto _ : state) benchmark::DoNotOptimize(energy(p, v, 0.01, {}, mode(state)));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

void BM_OptimizeStar(benchmark::State& state) {
  const MetricGraph g = make_star(3, 2.0);
  const Potential v = Potential::zero(g);
  OptimizeOptions o;
  o.h = 0.1;
  o.execution = mode(state);
  for (auto _ : state) benchmark::DoNotOptimize(optimize_k(g, v, 2, o));
  state.SetLabel(state.range(0) == 0 ? "serial" : "parallel");
}

}  // namespace

BENCHMARK(BM_ExteriorScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_PartitionEnergy)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_OptimizeStar)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(3);

BENCHMARK_MAIN();
