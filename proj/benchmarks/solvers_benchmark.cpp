#include "rotcic/datagen.hpp"
#include "rotcic/directions.hpp"
#include "rotcic/estimators.hpp"
#include "rotcic/exact_ot.hpp"
#include "rotcic/quantile_map.hpp"
#include "rotcic/robust.hpp"
#include "rotcic/seed.hpp"
#include "rotcic/sinkhorn.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace rotcic;

DatasetQuad quad(Index n, Index d) {
  if (d == 2) return generate_quad(LatentSpec::bivariate_gamma(), illustrative_pair(), n, 7);
  return generate_quad(LatentSpec::multivariate_gamma(d), gen_comonotone_pair(d, derive_seed(0, d)), n, 7);
}

void BM_ExactOt(benchmark::State& state) {
  const DatasetQuad q = quad(state.range(0), state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(exact_ot_plan(q.y0c, q.y1c).cost);
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_ExactOt)->Args({250, 2})->Args({500, 2})->Args({1000, 2})->Args({1000, 50})->Unit(benchmark::kMillisecond);

void BM_Sinkhorn(benchmark::State& state) {
  const DatasetQuad q = quad(state.range(0), 2);
  const SinkhornOptions opts{static_cast<double>(state.range(1))};
  for (auto _ : state) benchmark::DoNotOptimize(sinkhorn_plan(q.y0c, q.y1c, opts).cost);
}
BENCHMARK(BM_Sinkhorn)->Args({250, 30})->Args({500, 30})->Args({500, 10})->Unit(benchmark::kMillisecond);

void BM_OtCost1d(benchmark::State& state) {
  const DatasetQuad q = quad(state.range(0), 2);
  const EmpiricalMeasure a = EmpiricalMeasure::uniform(q.y0c.points().col(0));
  const EmpiricalMeasure b = EmpiricalMeasure::uniform(q.y1c.points().col(0));
  for (auto _ : state) benchmark::DoNotOptimize(ot_cost_1d(a, b));
}
BENCHMARK(BM_OtCost1d)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_RotSelect(benchmark::State& state) {
  const DatasetQuad q = quad(2000, state.range(0));
  const DirectionSet dirs = sample_directions(static_cast<int>(state.range(1)), state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(rot_select(q.y0c, q.y1c, dirs).cost);
}
BENCHMARK(BM_RotSelect)->Args({2, 10})->Args({100, 10})->Args({100, 100})->Args({100, 500})->Unit(benchmark::kMillisecond);

void BM_RotCounterfactual(benchmark::State& state) {
  const DatasetQuad q = quad(2000, state.range(0));
  const DirectionSet dirs = sample_directions(10, state.range(0), 3);
  for (auto _ : state) benchmark::DoNotOptimize(rot_counterfactual(q.y0c, q.y1c, q.y0t, dirs).samples.data());
}
BENCHMARK(BM_RotCounterfactual)->Arg(2)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_CicTensorized(benchmark::State& state) {
  const DatasetQuad q = quad(2000, state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(cic_tensorized(q.y0c, q.y1c, q.y0t).samples.data());
}
BENCHMARK(BM_CicTensorized)->Arg(2)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
