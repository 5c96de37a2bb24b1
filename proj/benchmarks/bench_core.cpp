#include <benchmark/benchmark.h>

#include <map>

#include "specluster/generators.hpp"
#include "specluster/kmeans.hpp"
#include "specluster/pipeline.hpp"
#include "specluster/spectral.hpp"

using namespace specluster;

namespace {

const SbmSample& cached_sbm(std::size_t n) {
  static std::map<std::size_t, SbmSample> cache;
  auto it = cache.find(n);
  if (it == cache.end()) {
    const double nn = static_cast<double>(n);
    it = cache.emplace(n, sample_sbm({n, 20, 40.0 / nn, 1.0 / (20.0 * nn), 1})).first;
  }
  return it->second;
}

void BM_ApplyM(benchmark::State& state) {
  const auto& g = cached_sbm(static_cast<std::size_t>(state.range(0))).graph;
  const SignlessLaplacianOp op(g);
  std::vector<double> x(g.num_vertices(), 1.0), y(g.num_vertices());
  for (auto _ : state) {
    op.apply(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations() * g.nnz()));
}
BENCHMARK(BM_ApplyM)->Arg(20000)->Arg(40000)->Arg(80000)->Unit(benchmark::kMicrosecond);

void BM_PowerMethodColumns(benchmark::State& state) {
  const auto& g = cached_sbm(20000).graph;
  const SignlessLaplacianOp op(g);
  const auto l = static_cast<std::size_t>(state.range(0));
  const auto x0 = sample_gaussian_vectors(g.num_vertices(), l, 1);
  for (auto _ : state) {
    auto x = x0;
    power_method_columns(op.as_operator(), x, 70);
    benchmark::DoNotOptimize(x.data().data());
  }
}
BENCHMARK(BM_PowerMethodColumns)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_Lloyd(benchmark::State& state) {
  const auto& g = cached_sbm(20000).graph;
  SpectralParams p;
  p.k = 20;
  const auto e = embed(g, resolve_params(p, g.num_vertices()));
  const PointSet pts = PointSet::from_embedding(scale_by_inv_sqrt_degree(g, e.raw));
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(lloyd(pts, 20, seed++).cost);
}
BENCHMARK(BM_Lloyd)->Unit(benchmark::kMillisecond);

void BM_SampleSbm(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const double nn = static_cast<double>(n);
    benchmark::DoNotOptimize(sample_sbm({n, 20, 40.0 / nn, 1.0 / (20.0 * nn), seed++}).graph.num_edges());
  }
}
BENCHMARK(BM_SampleSbm)->Arg(20000)->Arg(40000)->Arg(80000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
