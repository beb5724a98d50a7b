#include <benchmark/benchmark.h>

#include <cmath>

#include "mpp/frozen.hpp"
#include "mpp/gff.hpp"
#include "mpp/limitshape.hpp"
#include "mpp/observables.hpp"
#include "mpp/oracle.hpp"
#include "mpp/sampler.hpp"

using namespace mpp;

namespace {

LimitModel corner() { return {LimitBackWall::corner(), {1.0}}; }
LimitModel three_kink() {
  return {{{-kInf, -2.0, 0.0, 2.0, kInf}, {1.0, 2.0 / 3, 1.0 / 3, 0.0}, 0.0, 0.0}, {2.0, 2.0, 0.25}};
}

void BM_MomentK1(benchmark::State& st) {
  const auto w = wall_from_support({6, 6, {}});
  const auto spec = WeightSpec::from_qt(0.2, 0.4, 0.3);
  for (auto _ : st) benchmark::DoNotOptimize(moment_k1(w, spec, 0).value);
}
BENCHMARK(BM_MomentK1);

void BM_MomentMulti(benchmark::State& st) {
  const auto w = wall_from_support({4, 4, {}});
  const auto spec = WeightSpec::from_qt(0.2, 0.4, 0.05);
  const int m = static_cast<int>(st.range(0));
  const std::vector<int> xs(static_cast<std::size_t>(m), 0), ks(static_cast<std::size_t>(m), 1);
  for (auto _ : st) benchmark::DoNotOptimize(moment_multi(w, spec, xs, ks).value);
}
BENCHMARK(BM_MomentMulti)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_OracleEnumeration(benchmark::State& st) {
  const SkewSupport s{2, 2, {}};
  const auto spec = WeightSpec::from_qt(0.3, 0.3, 0.3);
  const int cap = static_cast<int>(st.range(0));
  for (auto _ : st)
    benchmark::DoNotOptimize(
        exact_expectation(s, spec, [](const SkewPlanePartition& pp) { return static_cast<double>(pp.volume()); }, cap));
}
BENCHMARK(BM_OracleEnumeration)->Arg(5)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_ChainSteps(benchmark::State& st) {
  const double eps = 0.1;
  const auto m = corner();
  const auto w = discretize(m.wall(), m.s(), eps, {static_cast<int>(st.range(0))});
  Chain ch(SkewPlanePartition::empty(w), WeightSpec{1, {1.0}, std::exp(-eps), 1.0, 2.0}, 1);
  for (auto _ : st) ch.run(10000);
  st.SetItemsProcessed(st.iterations() * 10000);
}
BENCHMARK(BM_ChainSteps)->Arg(20)->Arg(60);

void BM_HeightGrid(benchmark::State& st) {
  const auto m = three_kink();
  for (auto _ : st)
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j) benchmark::DoNotOptimize(H(m, -2.5 + 0.5 * i, -2.5 + 0.5 * j));
}
BENCHMARK(BM_HeightGrid)->Unit(benchmark::kMillisecond);

void BM_FrozenBoundary(benchmark::State& st) {
  const auto m = three_kink();
  for (auto _ : st) benchmark::DoNotOptimize(frozen_boundary(m, {}).segments.size());
}
BENCHMARK(BM_FrozenBoundary)->Unit(benchmark::kMillisecond);

void BM_ContourCovariance(benchmark::State& st) {
  const auto m = three_kink();
  for (auto _ : st) benchmark::DoNotOptimize(limit_covariance_contour(m, 0.5, 1, 1.5, 2, 1.0).value);
}
BENCHMARK(BM_ContourCovariance)->Unit(benchmark::kMillisecond);

void BM_PullbackCovariance(benchmark::State& st) {
  const auto m = corner();
  for (auto _ : st) benchmark::DoNotOptimize(gff_pullback_covariance(m, 0.3, 1.0, 0.8, 1.0));
}
BENCHMARK(BM_PullbackCovariance)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
